/// Whether a bounded-distance decoder correcting up to `e_g` generic errors
/// plus `e_z` additional Z errors corrects a weight-`j` pattern with `i` Z's
/// and `l` X's.
///
/// Patterns above `e_g` are accepted only while the excess weight is covered
/// by Z's, i.e. `i >= j - e_g`, matching the summation limits of the
/// asymmetric bounded-distance error rate.
pub fn bd_accepts(e_g: usize, e_z: usize, j: usize, i: usize, l: usize) -> bool {
    debug_assert!(i + l <= j);
    let _ = l;
    if j <= e_g {
        return true;
    }
    j <= e_g + e_z && i >= j - e_g
}
