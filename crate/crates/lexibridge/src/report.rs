//! Text renderings of findings and statistics.

use std::fmt::Write;

use lexibridge_core::model::Finding;
use lexibridge_core::stats::{
    EnrichmentDiff, EnrichmentRow, InventoryReport, InventoryRow, LoopMetrics, Metric, PosTable,
};

pub const COLUMNS: [&str; 5] = ["nouns", "verbs", "adjectives", "adverbs", "total"];

/// One line per finding: `severity<TAB>rule<TAB>locus<TAB>message`.
pub fn findings_lines(findings: &[Finding]) -> String {
    let mut out = String::new();
    for f in findings {
        let message = f.message.replace(['\t', '\n'], " ");
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            f.severity, f.rule_id, f.locus, message
        );
    }
    out
}

fn table_tsv<T: Copy>(table: &PosTable<T>, metrics: &[Metric<T>]) -> String {
    let mut out = format!("metric\t{}\n", COLUMNS.join("\t"));
    let cells = [
        table.nouns,
        table.verbs,
        table.adjectives,
        table.adverbs,
        table.total,
    ];
    for (name, get) in metrics {
        out.push_str(name);
        for cell in &cells {
            let _ = write!(out, "\t{}", get(cell));
        }
        out.push('\n');
    }
    out
}

pub fn inventory_tsv(report: &InventoryReport) -> String {
    table_tsv(report, &InventoryRow::METRICS)
}

pub fn diff_tsv(diff: &EnrichmentDiff) -> String {
    table_tsv(diff, &EnrichmentRow::METRICS)
}

/// `role<TAB>rejections<TAB>records` histogram rows.
pub fn loops_tsv(m: &LoopMetrics) -> String {
    let mut out = String::from("role\trejections\trecords\n");
    for (role, hist) in [("corrector", &m.corrector), ("expert", &m.expert)] {
        for (n, records) in hist {
            let _ = writeln!(out, "{role}\t{n}\t{records}");
        }
    }
    out
}
