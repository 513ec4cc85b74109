//! Combinatorics of the strata of a normal-crossings divisor with n
//! components: subsets T ⊆ {1..n} as bitmasks, strictly increasing chains of
//! subsets, their counts, and the category whose objects are chains and whose
//! morphisms select subchains.
//!
//! The stratum cut out by the components in T deepens as T grows, so chains
//! T_1 ⊊ … ⊊ T_m are descending flags of strata.

/// Subset of divisor components {0..n-1} as a bitmask.
pub type Mask = u32;

pub fn subsets(n: u32) -> Vec<Mask> {
    (0..(1u32 << n)).collect()
}

pub fn mask_contains(sup: Mask, sub: Mask) -> bool {
    sup & sub == sub
}

pub fn mask_elements(t: Mask, n: u32) -> Vec<u32> {
    (0..n).filter(|i| t & (1 << i) != 0).collect()
}

pub fn mask_label(t: Mask, n: u32) -> String {
    if t == 0 {
        return "Y_empty".to_string();
    }
    let parts: Vec<String> = mask_elements(t, n)
        .iter()
        .map(|i| (i + 1).to_string())
        .collect();
    format!("Y_{{{}}}", parts.join(","))
}

/// Strictly increasing chain of subsets T_1 ⊊ T_2 ⊊ … ⊊ T_m.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain(pub Vec<Mask>);

impl Chain {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.0.windows(2).all(|w| {
            w[0] != w[1] && mask_contains(w[1], w[0])
        })
    }

    pub fn label(&self, n: u32) -> String {
        let parts: Vec<String> = self.0.iter().map(|t| mask_label(*t, n)).collect();
        parts.join(" > ")
    }
}

/// All strictly increasing chains of exactly `m` subsets of {0..n-1}.
pub fn chains(n: u32, m: usize) -> Vec<Chain> {
    fn rec(n: u32, m: usize, acc: &mut Vec<Mask>, out: &mut Vec<Chain>) {
        if acc.len() == m {
            out.push(Chain(acc.clone()));
            return;
        }
        let last = acc.last().copied();
        for t in subsets(n) {
            if let Some(prev) = last {
                if t == prev || !mask_contains(t, prev) {
                    continue;
                }
            }
            acc.push(t);
            rec(n, m, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 {
        rec(n, m, &mut Vec::new(), &mut out);
    }
    out
}

/// Chain counts (|S_1|, …, |S_max|) by explicit enumeration.
pub fn nerve_counts(n: u32, max_len: usize) -> Vec<u64> {
    (1..=max_len).map(|m| chains(n, m).len() as u64).collect()
}

/// Closed-form count of strict m-chains: an element of {0..n-1} picks the
/// chain position where it first appears (or never appears), and positions
/// 2..m must each be picked by someone. Inclusion–exclusion over the missed
/// positions gives Σ_k (−1)^k C(m−1,k) (m+1−k)^n.
pub fn chain_count_formula(n: u32, m: usize) -> u64 {
    let mut total: i128 = 0;
    for k in 0..m {
        let c = binomial(m as u64 - 1, k as u64) as i128;
        let p = ((m + 1 - k) as i128).pow(n);
        if k % 2 == 0 {
            total += c * p;
        } else {
            total -= c * p;
        }
    }
    total as u64
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as u64
}

/// The category of chains: objects are all strict chains of length ≤ max_len,
/// a morphism c → d is an injective monotone selection of positions in d
/// whose entries reproduce c.
#[derive(Debug, Clone)]
pub struct ChainCategory {
    pub n: u32,
    pub objects: Vec<Chain>,
    /// (source object index, target object index, positions in target).
    pub morphisms: Vec<(usize, usize, Vec<usize>)>,
}

pub fn chain_category(n: u32, max_len: usize) -> ChainCategory {
    let mut objects = Vec::new();
    for m in 1..=max_len {
        objects.extend(chains(n, m));
    }
    let mut morphisms = Vec::new();
    for (si, c) in objects.iter().enumerate() {
        for (ti, d) in objects.iter().enumerate() {
            if c.len() > d.len() {
                continue;
            }
            for sel in selections(c, d) {
                morphisms.push((si, ti, sel));
            }
        }
    }
    ChainCategory {
        n,
        objects,
        morphisms,
    }
}

/// All injective monotone position maps realizing c as a subchain of d.
pub fn selections(c: &Chain, d: &Chain) -> Vec<Vec<usize>> {
    fn rec(
        c: &Chain,
        d: &Chain,
        ci: usize,
        start: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if ci == c.len() {
            out.push(acc.clone());
            return;
        }
        for di in start..d.len() {
            if d.0[di] == c.0[ci] {
                acc.push(di);
                rec(c, d, ci + 1, di + 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(c, d, 0, 0, &mut Vec::new(), &mut out);
    out
}

impl ChainCategory {
    pub fn identities(&self) -> usize {
        self.morphisms
            .iter()
            .filter(|(s, t, sel)| s == t && sel.iter().enumerate().all(|(i, &p)| i == p))
            .count()
    }

    /// Compose two morphisms given by indices into `morphisms`, if they are
    /// composable; composition of selections is index composition.
    pub fn compose(&self, first: usize, second: usize) -> Option<(usize, usize, Vec<usize>)> {
        let (s1, t1, sel1) = &self.morphisms[first];
        let (s2, t2, sel2) = &self.morphisms[second];
        if t1 != s2 {
            return None;
        }
        let sel: Vec<usize> = sel1.iter().map(|&p| sel2[p]).collect();
        Some((*s1, *t2, sel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_one_component() {
        assert_eq!(nerve_counts(1, 3), vec![2, 1, 0]);
    }

    #[test]
    fn counts_for_a_crossing() {
        assert_eq!(nerve_counts(2, 3), vec![4, 5, 2]);
    }

    #[test]
    fn counts_for_three_components() {
        assert_eq!(nerve_counts(3, 3), vec![8, 19, 18]);
    }

    #[test]
    fn formula_matches_enumeration_up_to_four() {
        for n in 1..=4 {
            for m in 1..=3 {
                assert_eq!(
                    chain_count_formula(n, m),
                    chains(n, m).len() as u64,
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn chains_are_strictly_increasing() {
        for c in chains(3, 3) {
            assert!(c.is_valid());
        }
    }

    #[test]
    fn category_for_one_component() {
        let cat = chain_category(1, 3);
        assert_eq!(cat.objects.len(), 3);
        assert_eq!(cat.identities(), 3);
        let non_id = cat.morphisms.len() - cat.identities();
        assert_eq!(non_id, 2);
    }

    #[test]
    fn category_for_a_crossing() {
        let cat = chain_category(2, 3);
        assert_eq!(cat.objects.len(), 11);
        // every object has an identity
        assert_eq!(cat.identities(), 11);
    }

    #[test]
    fn composition_closes() {
        let cat = chain_category(2, 3);
        for i in 0..cat.morphisms.len() {
            for j in 0..cat.morphisms.len() {
                if let Some(comp) = cat.compose(i, j) {
                    assert!(
                        cat.morphisms.contains(&comp),
                        "composite {comp:?} missing from category"
                    );
                }
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(mask_label(0, 2), "Y_empty");
        assert_eq!(mask_label(0b11, 2), "Y_{1,2}");
        let c = Chain(vec![0, 0b01, 0b11]);
        assert_eq!(c.label(2), "Y_empty > Y_{1} > Y_{1,2}");
    }
}
