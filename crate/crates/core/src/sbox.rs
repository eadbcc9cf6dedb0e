//! 4-bit S-boxes and their difference distribution tables.

use serde::Serialize;

use crate::prob::Prob;

/// A bijective 4-bit S-box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SBox4 {
    id: String,
    table: [u8; 16],
}

impl SBox4 {
    /// Returns `None` unless `table` is a permutation of `0..16`.
    pub fn new(id: impl Into<String>, table: [u8; 16]) -> Option<SBox4> {
        let mut seen = 0u16;
        for &v in &table {
            if v > 15 {
                return None;
            }
            seen |= 1 << v;
        }
        (seen == 0xFFFF).then(|| SBox4 {
            id: id.into(),
            table,
        })
    }

    /// Parses 16 hex digits, digit `j` being the image of `j`.
    pub fn from_hex(id: impl Into<String>, digits: &str) -> Option<SBox4> {
        let table = hex_table(digits)?;
        SBox4::new(id, table)
    }

    pub fn identity() -> SBox4 {
        let mut table = [0u8; 16];
        for (i, t) in table.iter_mut().enumerate() {
            *t = i as u8;
        }
        SBox4 {
            id: "id".into(),
            table,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn table(&self) -> &[u8; 16] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.table[(x & 0xF) as usize]
    }

    pub fn inverse(&self) -> SBox4 {
        let mut inv = [0u8; 16];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        SBox4 {
            id: format!("{}_inv", self.id),
            table: inv,
        }
    }

    /// Uppercase hex digits, the description-file form.
    pub fn to_hex(&self) -> String {
        self.table
            .iter()
            .map(|&v| char::from_digit(v as u32, 16).unwrap().to_ascii_uppercase())
            .collect()
    }
}

/// Parses 16 hex digits into a table without checking bijectivity.
pub(crate) fn hex_table(digits: &str) -> Option<[u8; 16]> {
    let digits: Vec<u8> = digits
        .chars()
        .map(|c| c.to_digit(16).map(|d| d as u8))
        .collect::<Option<_>>()?;
    digits.try_into().ok()
}

/// Difference distribution table: `counts[a][b] = #{x : S(x^a) ^ S(x) = b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ddt {
    pub counts: [[u32; 16]; 16],
}

impl Ddt {
    #[inline]
    pub fn get(&self, a: u8, b: u8) -> u32 {
        self.counts[a as usize][b as usize]
    }

    /// Largest entry outside row 0.
    pub fn uniformity(&self) -> u32 {
        self.counts[1..]
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Number of nontrivial entries equal to the uniformity.
    pub fn max_entries(&self) -> usize {
        let u = self.uniformity();
        self.counts[1..]
            .iter()
            .flat_map(|row| row.iter())
            .filter(|&&c| c == u)
            .count()
    }

    /// Compatible output differences for input difference `a`, by
    /// decreasing count then increasing value.
    pub fn transitions(&self, a: u8) -> Vec<(u8, u32)> {
        let mut out: Vec<(u8, u32)> = (0..16u8)
            .map(|b| (b, self.get(a, b)))
            .filter(|&(_, c)| c > 0)
            .collect();
        out.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        out
    }
}

pub fn compute_ddt(s: &SBox4) -> Ddt {
    let mut counts = [[0u32; 16]; 16];
    for (a, row) in counts.iter_mut().enumerate() {
        for x in 0..16u8 {
            let b = s.apply(x ^ a as u8) ^ s.apply(x);
            row[b as usize] += 1;
        }
    }
    Ddt { counts }
}

/// `max_{a != 0, b} counts[a][b] / 16`.
pub fn max_diff_prob(ddt: &Ddt) -> Prob {
    Prob::from_nibble_count(ddt.uniformity())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformityRow {
    pub id: String,
    pub uniformity: u32,
    pub max_entries: usize,
    pub bijective: bool,
}

/// One row per S-box, ordered by id.
pub fn diff_uniformity_report(sboxes: &[SBox4]) -> Vec<UniformityRow> {
    let mut rows: Vec<UniformityRow> = sboxes
        .iter()
        .map(|s| {
            let ddt = compute_ddt(s);
            UniformityRow {
                id: s.id().to_string(),
                uniformity: ddt.uniformity(),
                max_entries: ddt.max_entries(),
                // SBox4 cannot be constructed otherwise; checked anyway for the report
                bijective: (0..16).all(|b| ddt.counts.iter().map(|r| r[b]).sum::<u32>() == 16),
            }
        })
        .collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s1() -> SBox4 {
        SBox4::from_hex("s1", "1FB2035869C7DAE4").unwrap()
    }

    #[test]
    fn parses_hex_table() {
        assert_eq!(
            s1().table(),
            &[1, 15, 11, 2, 0, 3, 5, 8, 6, 9, 12, 7, 13, 10, 14, 4]
        );
        assert_eq!(s1().to_hex(), "1FB2035869C7DAE4");
        assert!(SBox4::from_hex("bad", "1FB2035869C7DAE1").is_none());
        assert!(SBox4::from_hex("short", "1FB2").is_none());
    }

    #[test]
    fn identity_ddt_is_diagonal() {
        let ddt = compute_ddt(&SBox4::identity());
        for a in 0..16 {
            assert_eq!(ddt.get(a, a), 16);
        }
        assert_eq!(max_diff_prob(&ddt), Prob::ONE);
        assert_eq!(diff_uniformity_report(&[SBox4::identity()])[0].uniformity, 16);
    }

    #[test]
    fn s1_entries() {
        let ddt = compute_ddt(&s1());
        assert_eq!(ddt.get(0, 0), 16);
        // (0,1) -> (1,F) and (1,0) -> (F,1)
        assert_eq!(ddt.get(1, 0xE), 2);
        assert_eq!(max_diff_prob(&ddt), Prob::new(1, 2));
    }

    #[test]
    fn transitions_sorted_by_count() {
        let ddt = compute_ddt(&s1());
        for a in 1..16 {
            let t = ddt.transitions(a);
            assert!(t.windows(2).all(|w| w[0].1 >= w[1].1));
            assert_eq!(t.iter().map(|x| x.1).sum::<u32>(), 16);
        }
        assert_eq!(ddt.transitions(0), vec![(0, 16)]);
    }

    fn any_sbox() -> impl Strategy<Value = SBox4> {
        Just((0u8..16).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| SBox4::new("p", v.try_into().unwrap()).unwrap())
    }

    proptest! {
        #[test]
        fn ddt_structure(s in any_sbox()) {
            let ddt = compute_ddt(&s);
            prop_assert_eq!(ddt.get(0, 0), 16);
            for a in 0..16 {
                prop_assert_eq!(ddt.counts[a].iter().sum::<u32>(), 16);
                prop_assert_eq!(ddt.counts.iter().map(|r| r[a]).sum::<u32>(), 16);
                prop_assert!(ddt.counts[a].iter().all(|c| c % 2 == 0));
            }
        }

        #[test]
        fn inverse_transposes_ddt(s in any_sbox()) {
            let (d, di) = (compute_ddt(&s), compute_ddt(&s.inverse()));
            for a in 0..16u8 {
                for b in 0..16u8 {
                    prop_assert_eq!(d.get(a, b), di.get(b, a));
                }
            }
        }

        #[test]
        fn affine_key_invariance(s in any_sbox(), k in 0u8..16, c in 0u8..16) {
            let mut t = [0u8; 16];
            for x in 0..16u8 {
                t[x as usize] = s.apply(x ^ k) ^ c;
            }
            let shifted = SBox4::new("k", t).unwrap();
            prop_assert_eq!(compute_ddt(&s), compute_ddt(&shifted));
        }
    }
}
