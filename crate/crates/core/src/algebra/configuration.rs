use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Default bound on `|η|` for configuration functions.
pub const N_MAX: usize = 8;

/// Finite multiset of atoms, stored as multiplicities `k_0..k_{M-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscreteConfiguration {
    counts: Vec<u32>,
}

impl DiscreteConfiguration {
    pub fn empty(m: usize) -> Self {
        Self { counts: vec![0; m] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    /// From a list of atom indices, repeats allowed.
    pub fn from_atoms(m: usize, atoms: &[usize]) -> Result<Self> {
        let mut c = Self::empty(m);
        for &i in atoms {
            if i >= m {
                return Err(Error::InvalidParameter(format!("atom {i} outside 0..{m}")));
            }
            c.counts[i] += 1;
        }
        Ok(c)
    }

    pub fn atoms(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, i: usize) -> u32 {
        self.counts[i]
    }

    /// `|η|`.
    pub fn len(&self) -> usize {
        self.counts.iter().map(|&k| k as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&k| k == 0)
    }

    /// `η ∪ {x_i}`.
    pub fn with(&self, i: usize) -> Self {
        let mut c = self.clone();
        c.counts[i] += 1;
        c
    }

    /// `η \ {x_i}`, if `x_i ∈ η`.
    pub fn without(&self, i: usize) -> Option<Self> {
        if self.counts[i] == 0 {
            return None;
        }
        let mut c = self.clone();
        c.counts[i] -= 1;
        Some(c)
    }

    /// Sub-multisets `ξ ⊆ η`, each once.
    pub fn sub_multisets(&self) -> Vec<DiscreteConfiguration> {
        let mut out = vec![DiscreteConfiguration::empty(self.atoms())];
        for (i, &k) in self.counts.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for base in &out {
                for j in 0..=k {
                    let mut c = base.clone();
                    c.counts[i] = j;
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }

    /// Canonical text form `i:k,j:l` over atoms with `k > 0`, indices from 0
    /// in increasing order; the empty configuration is `""`.
    pub fn canonical(&self) -> String {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, k)| format!("{i}:{k}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the canonical form. Repeated atoms and zero multiplicities are
    /// rejected so that every configuration has exactly one spelling.
    pub fn parse(s: &str, m: usize) -> Result<Self> {
        let mut c = Self::empty(m);
        if s.is_empty() {
            return Ok(c);
        }
        let mut last: Option<usize> = None;
        for part in s.split(',') {
            let bad = || Error::Config(format!("bad configuration {s:?}"));
            let (i, k) = part.split_once(':').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            if i >= m || k == 0 || last.is_some_and(|l| l >= i) {
                return Err(bad());
            }
            c.counts[i] = k;
            last = Some(i);
        }
        Ok(c)
    }
}

impl fmt::Display for DiscreteConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.canonical())
    }
}

impl Serialize for DiscreteConfiguration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.counts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscreteConfiguration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<u32>::deserialize(d).map(Self::from_counts)
    }
}

/// All multisets of exactly `n` atoms out of `m`, in a fixed order.
pub fn multisets(m: usize, n: usize) -> Vec<DiscreteConfiguration> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<DiscreteConfiguration>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(DiscreteConfiguration::from_counts(cur.clone()));
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    rec(0, n as u32, &mut vec![0; m], &mut out);
    out
}

/// All multisets with at most `n_max` atoms, by increasing size.
pub fn multisets_upto(m: usize, n_max: usize) -> Vec<DiscreteConfiguration> {
    (0..=n_max).flat_map(|n| multisets(m, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::binomial;

    #[test]
    fn canonical_round_trip() {
        let c = DiscreteConfiguration::from_atoms(4, &[3, 1, 1]).unwrap();
        assert_eq!(c.canonical(), "1:2,3:1");
        assert_eq!(DiscreteConfiguration::parse("1:2,3:1", 4).unwrap(), c);
        assert_eq!(DiscreteConfiguration::parse("", 4).unwrap(), DiscreteConfiguration::empty(4));
        for bad in ["3:1,1:2", "1:0", "4:1", "1:1,1:1", "x", "1:"] {
            assert!(DiscreteConfiguration::parse(bad, 4).is_err(), "{bad}");
        }
    }

    #[test]
    fn multiset_counts_are_binomial() {
        for m in 1..5 {
            for n in 0..6 {
                let all = multisets(m, n);
                assert_eq!(all.len() as f64, binomial((m + n - 1) as u32, n as u32));
                assert!(all.iter().all(|c| c.len() == n));
            }
        }
        assert_eq!(multisets_upto(3, 2).len(), 1 + 3 + 6);
    }

    #[test]
    fn sub_multisets_of_a_multiset() {
        let c = DiscreteConfiguration::from_atoms(3, &[0, 0, 2]).unwrap();
        let subs = c.sub_multisets();
        assert_eq!(subs.len(), 6);
        assert!(subs.iter().all(|s| (0..3).all(|i| s.count(i) <= c.count(i))));
        assert_eq!(c.with(1).without(1), Some(c.clone()));
        assert_eq!(c.without(1), None);
    }
}
