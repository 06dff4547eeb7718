use lexibridge_core::model::PosBucket;
use lexibridge_core::stats::{inventory, CountingPolicy, EnrichmentRow, InventoryRow, PosTable};
use lexibridge_testkit::{checks, gen, tables};
use proptest::prelude::*;

#[test]
fn published_tables_sum() {
    checks::golden_sums().unwrap();
}

#[test]
fn published_rows_by_hand() {
    for (name, per_pos, total) in tables::ENRICHMENT {
        assert_eq!(per_pos.iter().sum::<u64>(), total, "{name}");
    }
    let synonyms: u64 = tables::INVENTORY.iter().map(|r| r.1).sum();
    assert_eq!(synonyms, tables::INVENTORY_TOTAL.1);
}

#[test]
fn empty_inventory_is_zero() {
    assert_eq!(inventory([], CountingPolicy::All), PosTable::default());
}

fn enrichment_row() -> impl Strategy<Value = EnrichmentRow> {
    prop::array::uniform6(0u64..1_000_000).prop_map(|v| EnrichmentRow {
        synonyms_added: v[0],
        synonyms_excluded: v[1],
        glosses_added: v[2],
        examples_added: v[3],
        gaps_identified: v[4],
        phrases_added: v[5],
    })
}

proptest! {
    #[test]
    fn totals_are_column_sums(rows in prop::array::uniform4(enrichment_row())) {
        let table = PosTable::from_rows(rows);
        for (_, get) in EnrichmentRow::METRICS {
            prop_assert_eq!(get(&table.total), rows.iter().map(get).sum::<u64>());
        }
    }

    #[test]
    fn inventory_totals_and_buckets(set in gen::record_set()) {
        let report = inventory(set.values(), CountingPolicy::All);
        let mut want = [InventoryRow::default(); 4];
        for r in set.values().filter(|r| !r.is_gap) {
            let row = &mut want[r.source.pos.bucket().index()];
            row.synsets += 1;
            row.synonyms += r.synonyms.len() as u64;
        }
        for bucket in PosBucket::ALL {
            prop_assert_eq!(report.row(bucket), want[bucket.index()]);
        }
        prop_assert_eq!(report.total.synsets, want.iter().map(|r| r.synsets).sum::<u64>());
        prop_assert_eq!(report.total.synonyms, want.iter().map(|r| r.synonyms).sum::<u64>());
    }
}
