use std::collections::HashMap;
use serde::Serialize;

/* Frequency table of byte values. */
pub fn histogram(data: &[u8]) -> HashMap<u8, u64> {
    let mut counts = HashMap::new();
    for b in data {
        // entry API avoids a double lookup
        *counts.entry(*b).or_insert(0) += 1;
    }
    counts
}
