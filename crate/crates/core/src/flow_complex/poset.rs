//! The marked chain posets `𝔸ᵏ_{pq}` indexing boundary strata.
//!
//! An element is a chain of intermediate generators `p < r₁ < … < r_l < q`
//! together with `k` markers, each naming a segment `0..=l` of the chain.
//! Coarser chains sit higher; the top element is `(pq, 𝟎)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowPosetElem {
    /// Intermediate generator ids in action order; endpoints are implicit.
    pub chain: Vec<usize>,
    /// `markers[j]` is the segment holding the `j`-th marker.
    pub markers: Vec<usize>,
}

impl FlowPosetElem {
    pub fn new(chain: Vec<usize>, markers: Vec<usize>) -> Self {
        assert!(markers.iter().all(|&h| h <= chain.len()), "marker outside the chain");
        FlowPosetElem { chain, markers }
    }

    pub fn top(k: usize) -> Self {
        FlowPosetElem { chain: Vec::new(), markers: alloc::vec![0; k] }
    }

    pub fn depth(&self) -> usize {
        self.chain.len()
    }
}

/// Monotone injections `f` with `fine.chain[f(i)] = coarse.chain[i]`.
fn embeddings(fine: &[usize], coarse: &[usize]) -> Vec<Vec<usize>> {
    fn go(fine: &[usize], coarse: &[usize], from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == coarse.len() {
            out.push(acc.clone());
            return;
        }
        let need = coarse[acc.len()];
        for pos in from..fine.len() {
            if fine[pos] == need {
                acc.push(pos);
                go(fine, coarse, pos + 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(fine, coarse, 0, &mut Vec::new(), &mut out);
    out
}

/// `a ≤ b`: `b`'s chain embeds in `a`'s by a monotone `f`, and every marker
/// of `a` lies in the stretch of `a` that `b`'s marker segment covers,
/// `f(h) ≤ h' ≤ f(h+1) − 1` with `f(0) = 0`, `f(l+1) = m+1` (1-based).
pub fn poset_leq(a: &FlowPosetElem, b: &FlowPosetElem) -> bool {
    if a.markers.len() != b.markers.len() {
        return false;
    }
    let m = a.chain.len();
    let l = b.chain.len();
    embeddings(&a.chain, &b.chain).into_iter().any(|f| {
        let f_at = |h: usize| if h == 0 { 0 } else if h == l + 1 { m + 1 } else { f[h - 1] + 1 };
        a.markers.iter().zip(&b.markers).all(|(&ha, &hb)| f_at(hb) <= ha && ha < f_at(hb + 1))
    })
}

/// Every element over the candidate intermediates `(id, action)`; chains use
/// strictly increasing action.
pub fn enumerate_poset(candidates: &[(usize, i64)], k: usize) -> Vec<FlowPosetElem> {
    let mut sorted = candidates.to_vec();
    sorted.sort_by_key(|&(id, a)| (a, id));
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << sorted.len()) {
        let picked: Vec<(usize, i64)> = (0..sorted.len()).filter(|i| mask & (1 << i) != 0).map(|i| sorted[i]).collect();
        if picked.windows(2).all(|w| w[0].1 < w[1].1) {
            chains.push(picked.into_iter().map(|(id, _)| id).collect());
        }
    }
    let mut out = Vec::new();
    for chain in chains {
        let l = chain.len();
        let total = (l + 1).pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let markers = (0..k)
                .map(|_| {
                    let h = c % (l + 1);
                    c /= l + 1;
                    h
                })
                .collect();
            out.push(FlowPosetElem::new(chain.clone(), markers));
        }
    }
    out.sort();
    out
}

/// Every saturated chain from each element to the top has length equal to
/// the element's depth.
pub fn is_homogeneous(elements: &[FlowPosetElem]) -> bool {
    let n = elements.len();
    let less = |i: usize, j: usize| i != j && poset_leq(&elements[i], &elements[j]);
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| less(i, j) && !(0..n).any(|c| less(i, c) && less(c, j)))
                .collect()
        })
        .collect();
    let mut lengths: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| elements[i].depth());
    for &i in &order {
        let set: BTreeSet<usize> = if covers[i].is_empty() {
            BTreeSet::from([0])
        } else {
            covers[i].iter().flat_map(|j| lengths[j].iter().map(|x| x + 1)).collect()
        };
        lengths.insert(i, set);
    }
    (0..n).all(|i| lengths[&i].len() == 1 && lengths[&i].contains(&elements[i].depth()))
}

/// Splices a pair from `𝔸^{k₀}_{pr} × 𝔸^{k₁}_{rq}` into `𝔸ᵏ_{pq}` under the
/// depth-one element `(prq, h)`: markers with `h_j = 0` come from the left
/// factor in order, the others from the right shifted past `r`.
pub fn boundary_glue(left: &FlowPosetElem, right: &FlowPosetElem, r: usize, h: &[usize]) -> FlowPosetElem {
    let mut chain = left.chain.clone();
    chain.push(r);
    chain.extend_from_slice(&right.chain);
    let (mut i0, mut i1) = (0, 0);
    let markers = h
        .iter()
        .map(|&side| {
            if side == 0 {
                i0 += 1;
                left.markers[i0 - 1]
            } else {
                i1 += 1;
                right.markers[i1 - 1] + left.chain.len() + 1
            }
        })
        .collect();
    FlowPosetElem::new(chain, markers)
}

/// Checks by enumeration that [`boundary_glue`] is an order isomorphism from
/// the product poset onto the lower set of `(prq, h)`.
pub fn verify_boundary_iso(candidates: &[(usize, i64)], r: (usize, i64), h: &[usize]) -> bool {
    let left_c: Vec<_> = candidates.iter().copied().filter(|&(_, a)| a < r.1).collect();
    let right_c: Vec<_> = candidates.iter().copied().filter(|&(_, a)| a > r.1).collect();
    let k0 = h.iter().filter(|&&x| x == 0).count();
    let k1 = h.len() - k0;
    let left = enumerate_poset(&left_c, k0);
    let right = enumerate_poset(&right_c, k1);
    let apex = FlowPosetElem::new(alloc::vec![r.0], h.to_vec());
    let full = enumerate_poset(candidates, h.len());
    let lower: BTreeSet<FlowPosetElem> = full.into_iter().filter(|b| poset_leq(b, &apex)).collect();
    let pairs: Vec<(&FlowPosetElem, &FlowPosetElem)> = left.iter().flat_map(|a| right.iter().map(move |b| (a, b))).collect();
    let images: Vec<FlowPosetElem> = pairs.iter().map(|(a, b)| boundary_glue(a, b, r.0, h)).collect();
    let image_set: BTreeSet<FlowPosetElem> = images.iter().cloned().collect();
    if image_set.len() != images.len() || image_set != lower {
        return false;
    }
    for (x, ix) in pairs.iter().zip(&images) {
        for (y, iy) in pairs.iter().zip(&images) {
            let product = poset_leq(x.0, y.0) && poset_leq(x.1, y.1);
            if product != poset_leq(ix, iy) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(chain: &[usize], markers: &[usize]) -> FlowPosetElem {
        FlowPosetElem::new(chain.to_vec(), markers.to_vec())
    }

    #[test]
    fn order_examples() {
        let cands = [(1, 1), (2, 2), (3, 3)];
        for k in 0..=2 {
            let top = FlowPosetElem::top(k);
            assert!(enumerate_poset(&cands, k).iter().all(|a| poset_leq(a, &top)));
        }
        assert!(poset_leq(&e(&[1], &[0]), &e(&[], &[0])));
        assert!(poset_leq(&e(&[1], &[1]), &e(&[], &[0])));
        assert!(!poset_leq(&e(&[1, 2], &[]), &e(&[2, 1], &[])));
        assert!(!poset_leq(&e(&[1], &[0]), &e(&[1], &[1])));
        assert!(!poset_leq(&e(&[], &[0]), &e(&[1], &[0])));
    }

    #[test]
    fn partial_order_axioms() {
        let cands = [(1, 1), (2, 2), (3, 3)];
        let els = enumerate_poset(&cands, 2);
        for a in &els {
            assert!(poset_leq(a, a));
            for b in &els {
                if a != b && poset_leq(a, b) {
                    assert!(!poset_leq(b, a));
                }
                for c in &els {
                    if poset_leq(a, b) && poset_leq(b, c) {
                        assert!(poset_leq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn homogeneity() {
        for n in 0..=4usize {
            let cands: Vec<(usize, i64)> = (0..n).map(|i| (i + 1, i as i64 + 1)).collect();
            for k in 0..=3 {
                if n == 4 && k == 3 {
                    continue;
                }
                assert!(is_homogeneous(&enumerate_poset(&cands, k)), "n={n} k={k}");
            }
        }
        // equal actions cannot share a chain
        let tied = [(1, 1), (2, 1), (3, 2)];
        assert!(is_homogeneous(&enumerate_poset(&tied, 1)));
    }

    #[test]
    fn boundary_isomorphisms() {
        let cands = [(1, 1), (2, 2), (3, 3), (4, 4)];
        assert!(verify_boundary_iso(&cands, (2, 2), &[]));
        assert!(verify_boundary_iso(&cands, (2, 2), &[0]));
        assert!(verify_boundary_iso(&cands, (2, 2), &[1]));
        assert!(verify_boundary_iso(&cands, (2, 2), &[0, 1]));
        assert!(verify_boundary_iso(&cands, (3, 3), &[1, 0, 1]));
        let g = boundary_glue(&e(&[1], &[1]), &e(&[3], &[0]), 2, &[0, 1]);
        assert_eq!(g, e(&[1, 2, 3], &[1, 2]));
    }
}
