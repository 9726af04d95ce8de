#![allow(dead_code)]

use chiro_core::chirotope::points::random_general_position;
use chiro_core::{Chirotope, Label, RootedChirotope};
use rand::Rng;

/// Random realizable rooted chirotope on `n` points, rooted at a random
/// hull vertex.
pub fn random_rooted<R: Rng>(n: usize, rng: &mut R) -> RootedChirotope {
    let ps = random_general_position(n, 64, rng);
    let hull = ps.hull();
    let root = hull[rng.gen_range(0..hull.len())];
    RootedChirotope::new(ps.chirotope().unwrap(), root).unwrap()
}

/// Searches for a relabelling `perm` (old label → new label) with
/// `a.relabel(perm) == b` that also sends `root_a` to `root_b`.
pub fn isomorphism(a: &Chirotope, root_a: Label, b: &Chirotope, root_b: Label) -> Option<Vec<Label>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    perm[root_a] = root_b;
    used[root_b] = true;
    let order: Vec<Label> = std::iter::once(root_a).chain((0..n).filter(|&x| x != root_a)).collect();
    if extend(a, b, &order, 1, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

fn extend(a: &Chirotope, b: &Chirotope, order: &[Label], depth: usize, perm: &mut [Label], used: &mut [bool]) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for cand in 0..a.len() {
        if used[cand] {
            continue;
        }
        perm[x] = cand;
        let ok = (0..depth).all(|i| {
            (0..i).all(|j| {
                let (p, q) = (order[j], order[i]);
                a.sign_unchecked(p, q, x) == b.sign_unchecked(perm[p], perm[q], cand)
            })
        });
        if ok {
            used[cand] = true;
            if extend(a, b, order, depth + 1, perm, used) {
                return true;
            }
            used[cand] = false;
        }
    }
    perm[x] = usize::MAX;
    false
}
