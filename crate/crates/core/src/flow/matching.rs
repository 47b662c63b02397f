use num_complex::Complex64;

/// Bottleneck distance between two equally sized point sets, with a matching
/// `perm` such that a[i] is paired with b[perm[i]].
///
/// Returns `None` when the sets differ in size.
pub fn bottleneck(a: &[Complex64], b: &[Complex64]) -> Option<(f64, Vec<usize>)> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    if n == 0 {
        return Some((0.0, Vec::new()));
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let mut cand: Vec<f64> = dist.iter().flatten().copied().collect();
    cand.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cand.dedup();
    // Smallest threshold admitting a perfect matching.
    let (mut lo, mut hi) = (0usize, cand.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, cand[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let perm = perfect_matching(&dist, cand[lo]).expect("largest threshold always matches");
    Some((cand[lo], perm))
}

/// Kuhn's augmenting-path algorithm on the graph of pairs with distance ≤ r.
fn perfect_matching(dist: &[Vec<f64>], r: f64) -> Option<Vec<usize>> {
    let n = dist.len();
    let mut match_b: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, dist, r, &mut seen, &mut match_b) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (j, m) in match_b.iter().enumerate() {
        perm[m.expect("perfect matching")] = j;
    }
    Some(perm)
}

fn augment(i: usize, dist: &[Vec<f64>], r: f64, seen: &mut [bool], match_b: &mut [Option<usize>]) -> bool {
    for j in 0..dist.len() {
        if dist[i][j] <= r && !seen[j] {
            seen[j] = true;
            let free = match match_b[j] {
                None => true,
                Some(k) => augment(k, dist, r, seen, match_b),
            };
            if free {
                match_b[j] = Some(i);
                return true;
            }
        }
    }
    false
}
