//! Published inventory and enrichment figures, typed in by hand.

/// Synsets and synonyms per part of speech: nouns, verbs, adjectives, adverbs.
pub const INVENTORY: [(u64, u64); 4] = [(6516, 13659), (2507, 5878), (446, 761), (107, 262)];
pub const INVENTORY_TOTAL: (u64, u64) = (9576, 20560);

/// Enrichment metrics: per-POS values and the published total.
pub const ENRICHMENT: [(&str, [u64; 4], u64); 6] = [
    ("synonyms_added", [2581, 64, 72, 9], 2726),
    ("synonyms_excluded", [6050, 2387, 223, 91], 8751),
    ("glosses_added", [6511, 2258, 446, 107], 9322),
    ("examples_added", [7597, 3620, 782, 205], 12204),
    ("gaps_identified", [28, 187, 0, 21], 236),
    ("phrases_added", [364, 275, 0, 62], 701),
];
