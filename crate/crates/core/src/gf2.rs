//! Dense GF(2) row reduction over packed rows.

/// A packed row together with a bitmask recording which input rows were
/// XOR-ed into it.
#[derive(Clone, Debug)]
pub(crate) struct TrackedRow {
    pub bits: Vec<u64>,
    pub combo: Vec<u64>,
}

fn bit(row: &[u64], i: usize) -> bool {
    (row[i / 64] >> (i % 64)) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Rank of a set of rows, each `width` bits wide.
pub(crate) fn rank(rows: &[Vec<u64>], width: usize) -> usize {
    let mut rows: Vec<Vec<u64>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                xor_into(row, &pivot_row);
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced row echelon form with combination tracking. Returns the reduced
/// rows (pivot rows first, in pivot-column order) and their pivot columns.
pub(crate) fn reduce_tracked(rows: &[Vec<u64>], width: usize) -> (Vec<TrackedRow>, Vec<usize>) {
    let m = rows.len();
    let combo_words = m.div_ceil(64).max(1);
    let mut tracked: Vec<TrackedRow> = rows
        .iter()
        .enumerate()
        .map(|(i, bits)| {
            let mut combo = vec![0u64; combo_words];
            combo[i / 64] |= 1 << (i % 64);
            TrackedRow {
                bits: bits.clone(),
                combo,
            }
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m).find(|&r| bit(&tracked[r].bits, col)) else {
            continue;
        };
        tracked.swap(rank, p);
        let pivot = tracked[rank].clone();
        for (r, row) in tracked.iter_mut().enumerate() {
            if r != rank && bit(&row.bits, col) {
                xor_into(&mut row.bits, &pivot.bits);
                xor_into(&mut row.combo, &pivot.combo);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (tracked, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vec![0b011], vec![0b110], vec![0b101]];
        assert_eq!(rank(&rows, 3), 2);
        assert_eq!(rank(&[vec![0b1], vec![0b10]], 2), 2);
        assert_eq!(rank(&[], 4), 0);
    }

    #[test]
    fn tracked_reduction_records_combinations() {
        let rows = vec![vec![0b011], vec![0b110]];
        let (red, piv) = reduce_tracked(&rows, 3);
        assert_eq!(piv, vec![0, 1]);
        for r in &red[..2] {
            let mut acc = 0u64;
            for (i, row) in rows.iter().enumerate() {
                if (r.combo[0] >> i) & 1 == 1 {
                    acc ^= row[0];
                }
            }
            assert_eq!(acc, r.bits[0]);
        }
    }
}
