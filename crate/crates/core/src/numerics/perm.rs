//! Permutations made of two ascending runs.

use crate::error::{Error, Result};

/// All permutations `μ` of `1..=n` with `μ_1 < … < μ_{split-1}` and
/// `μ_split < … < μ_n`. There are `binomial(n, split-1)` of them, one per
/// choice of the first run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationFamily {
    pub n: usize,
    pub split: usize,
    /// 1-based permutations, lexicographic by the first run.
    pub members: Vec<Vec<usize>>,
}

impl PermutationFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// First run `{μ_1, …, μ_{split-1}}` of each member as a membership mask
    /// over `1..=n` (index 0 is unused).
    pub fn head_masks(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        self.members.iter().map(move |mu| {
            let mut mask = vec![false; self.n + 1];
            for &m in &mu[..self.split - 1] {
                mask[m] = true;
            }
            mask
        })
    }
}

pub fn enumerate_permutations(n: usize, split: usize) -> Result<PermutationFamily> {
    if n == 0 || split == 0 || split > n {
        return Err(Error::Domain(format!("split {split} out of range 1..={n}")));
    }
    let head = split - 1;
    let mut members = Vec::with_capacity(binomial(n, head) as usize);
    let mut comb: Vec<usize> = (1..=head).collect();
    loop {
        let mut mu = comb.clone();
        mu.extend((1..=n).filter(|v| !comb.contains(v)));
        members.push(mu);

        // next combination in lexicographic order
        let mut i = head;
        loop {
            if i == 0 {
                return Ok(PermutationFamily { n, split, members });
            }
            i -= 1;
            if comb[i] < n - head + i + 1 {
                comb[i] += 1;
                for j in i + 1..head {
                    comb[j] = comb[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Heap's algorithm, used to brute-force the family.
    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        let mut a: Vec<usize> = (1..=n).collect();
        let mut out = vec![a.clone()];
        let mut c = vec![0; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(a.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    fn brute_force(n: usize, split: usize) -> Vec<Vec<usize>> {
        let mut v: Vec<_> = all_permutations(n)
            .into_iter()
            .filter(|mu| {
                mu[..split - 1].windows(2).all(|w| w[0] < w[1])
                    && mu[split - 1..].windows(2).all(|w| w[0] < w[1])
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn small_families() {
        let f = enumerate_permutations(3, 1).unwrap();
        assert_eq!(f.members, vec![vec![1, 2, 3]]);

        let f = enumerate_permutations(3, 2).unwrap();
        assert_eq!(f.members, vec![vec![1, 2, 3], vec![2, 1, 3], vec![3, 1, 2]]);

        assert_eq!(enumerate_permutations(4, 3).unwrap().len(), 6);
    }

    #[test]
    fn out_of_range_split() {
        assert!(enumerate_permutations(3, 0).is_err());
        assert!(enumerate_permutations(3, 4).is_err());
    }

    #[test]
    fn matches_brute_force_up_to_eight() {
        for n in 1..=8 {
            for split in 1..=n {
                let fam = enumerate_permutations(n, split).unwrap();
                assert_eq!(fam.len() as u64, binomial(n, split - 1));
                let mut got = fam.members.clone();
                got.sort();
                assert_eq!(got, brute_force(n, split), "n={n} split={split}");
                for mu in &fam.members {
                    let mut s = mu.clone();
                    s.sort();
                    assert_eq!(s, (1..=n).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn ordering_is_lexicographic_in_first_run() {
        let f = enumerate_permutations(5, 3).unwrap();
        let heads: Vec<_> = f.members.iter().map(|m| m[..2].to_vec()).collect();
        let mut sorted = heads.clone();
        sorted.sort();
        assert_eq!(heads, sorted);
    }
}
