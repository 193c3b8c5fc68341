use super::{ceil_log2, finish, DepthCertificate};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, Vertex, VertexOrder};
use crate::network::{Comparator, Provenance, SortingNetwork, Stage};

/// Odd-even transposition sort on the path `P_n`: `n` stages, stage `k`
/// (1-based) compares the pairs `(i, i+1)` with `i ≡ k (mod 2)`, 1-based.
pub fn odd_even_transposition(n: usize) -> Result<SortingNetwork> {
    if n == 0 {
        return Err(Error::Param("n must be at least 1".into()));
    }
    let g = generate(&Family::Path(n))?;
    let rounds = if n == 1 { 0 } else { n };
    let stages = (0..rounds)
        .map(|k| {
            // 1-based i ≡ k+1 (mod 2) is 0-based i ≡ k (mod 2)
            Stage::new((k % 2..n.saturating_sub(1)).step_by(2).map(|i| Comparator::compare(i, i + 1)).collect())
        })
        .collect();
    let cert = DepthCertificate::new("odd_even_transposition").param("n", n).bound(rounds);
    finish(g, stages, VertexOrder::identity(n), Provenance::new("odd_even_transposition").with("n", n), cert, true)
}

/// Batcher's bitonic sorter on the hypercube `Q_dim`; vertex ids are bit
/// vectors, so every comparator joins vertices differing in one bit.
pub fn bitonic_hypercube(dim: usize) -> Result<SortingNetwork> {
    if dim == 0 || dim > 24 {
        return Err(Error::Param("dim must be in 1..=24".into()));
    }
    let n = 1usize << dim;
    let g = generate(&Family::Hypercube(dim))?;
    let mut stages = Vec::new();
    let mut k = 2;
    while k <= n {
        let mut j = k / 2;
        while j >= 1 {
            let mut s = Vec::new();
            for i in 0..n {
                let l = i ^ j;
                if l > i {
                    s.push(if i & k == 0 { Comparator::compare(i, l) } else { Comparator::compare(l, i) });
                }
            }
            stages.push(Stage::new(s));
            j /= 2;
        }
        k *= 2;
    }
    let cert = DepthCertificate::new("bitonic").param("dim", dim).bound(dim * (dim + 1) / 2);
    finish(g, stages, VertexOrder::identity(n), Provenance::new("bitonic_hypercube").with("dim", dim), cert, false)
}

/// Stages of Batcher's odd-even merge sort on `n` keys (min on the first
/// index). Sizes other than powers of two are padded with virtual `+∞`
/// keys on the top indices; comparators touching them are dropped.
pub fn batcher_stages(n: usize) -> Vec<Vec<(usize, usize)>> {
    let big = 1usize << ceil_log2(n.max(1));
    let mut out = Vec::new();
    let mut p = 1;
    while p < big {
        let mut k = p;
        while k >= 1 {
            let mut s = Vec::new();
            let mut j = k % p;
            while j + k < big {
                for i in 0..k.min(big - j - k) {
                    if (i + j) / (2 * p) == (i + j + k) / (2 * p) && i + j + k < n {
                        s.push((i + j, i + j + k));
                    }
                }
                j += 2 * k;
            }
            if !s.is_empty() {
                out.push(s);
            }
            k /= 2;
        }
        p *= 2;
    }
    out
}

/// Batcher's merge sort on `K_n`, standing in for a logarithmic-depth
/// sorter; depth at most `L(L+1)/2` with `L = ⌈log₂ n⌉`.
pub fn batcher_complete(n: usize) -> Result<SortingNetwork> {
    if n == 0 {
        return Err(Error::Param("n must be at least 1".into()));
    }
    let g = generate(&Family::Complete(n))?;
    let stages = batcher_stages(n)
        .into_iter()
        .map(|s| Stage::new(s.into_iter().map(|(a, b)| Comparator::compare(a, b)).collect()))
        .collect();
    let l = ceil_log2(n);
    let cert = DepthCertificate::new("batcher").param("n", n).bound(l * (l + 1) / 2);
    finish(g, stages, VertexOrder::identity(n), Provenance::new("batcher_complete").with("n", n), cert, false)
}

/// A sequential list of comparisons `(i, j)`, `i < j`, that sorts `q`
/// items when each puts the minimum on `i`.
pub fn sequential_sorter(q: usize) -> Vec<(Vertex, Vertex)> {
    batcher_stages(q).into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorts_all_permutations(net: &SortingNetwork) -> bool {
        let n = net.n();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let out = net.execute(&perm).unwrap();
            if !net.is_sorted(&out) {
                return false;
            }
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { return true };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }

    #[test]
    fn odd_even_shapes() {
        assert_eq!(odd_even_transposition(1).unwrap().depth(), 0);
        let net = odd_even_transposition(4).unwrap();
        assert_eq!(net.depth(), 4);
        assert_eq!(net.stages[0].comparators, vec![Comparator::compare(0, 1), Comparator::compare(2, 3)]);
        assert_eq!(net.stages[1].comparators, vec![Comparator::compare(1, 2)]);
        assert!(sorts_all_permutations(&net));
        assert_eq!(odd_even_transposition(2).unwrap().depth(), 2);
    }

    #[test]
    fn bitonic_shapes() {
        assert_eq!(bitonic_hypercube(1).unwrap().size(), 1);
        let net = bitonic_hypercube(2).unwrap();
        assert_eq!(net.depth(), 3);
        assert!(sorts_all_permutations(&net));
        assert_eq!(bitonic_hypercube(4).unwrap().depth(), 10);
    }

    #[test]
    fn batcher_shapes() {
        assert_eq!(batcher_complete(2).unwrap().depth(), 1);
        assert!(sorts_all_permutations(&batcher_complete(6).unwrap()));
        assert!(batcher_complete(32).unwrap().depth() <= 15);
        assert_eq!(batcher_complete(1).unwrap().depth(), 0);
    }

    #[test]
    fn sequential_lists() {
        assert_eq!(sequential_sorter(2), vec![(0, 1)]);
        assert!(sequential_sorter(8).len() <= 48);
        let list = sequential_sorter(4);
        let mut perm = [0usize, 1, 2, 3];
        for _ in 0..24 {
            let mut keys = perm;
            for &(i, j) in &list {
                if keys[i] > keys[j] {
                    keys.swap(i, j);
                }
            }
            assert_eq!(keys, [0, 1, 2, 3]);
            let i = (1..4).rev().find(|&i| perm[i - 1] < perm[i]).unwrap_or(0);
            if i == 0 {
                break;
            }
            let j = (i..4).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }
}
