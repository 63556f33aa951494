/// Koszul sign of a permutation of graded elements.
///
/// `perm[k]` is the original position of the element placed at position `k`.
/// Every pair that changes relative order contributes `(-1)^{|a||b|}`.
pub fn koszul_sign(degrees: &[i32], perm: &[usize]) -> i64 {
    assert_eq!(degrees.len(), perm.len(), "permutation length mismatch");
    let mut odd = 0u32;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && degrees[perm[i]] % 2 != 0 && degrees[perm[j]] % 2 != 0 {
                odd += 1;
            }
        }
    }
    if odd % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^n` for any integer `n`.
pub fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
