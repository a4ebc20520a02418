//! Machine-readable outputs: poset summaries, family tables, labeled Hasse
//! diagrams.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{arg, Caps, Error, Result};
use crate::invariants::{characteristic_polynomial, mu_polynomial, whitney_numbers};
use crate::labeling::edge_label;
use crate::poly::IntPolynomial;
use crate::poset::{Poset, Variant};
use crate::trees::families::{family_counts, Family};
use crate::trees::rooted::descent_polynomial;

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(Variant::Weighted),
            "augmented" => Ok(Variant::WeightedAugmented),
            "pointed" => Ok(Variant::Pointed),
            _ => arg(format!("unknown variant {s:?}")),
        }
    }
}

/// Summary of one constructed poset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosetReport {
    pub n: usize,
    pub variant: Variant,
    pub rank_sizes: Vec<usize>,
    /// Absent for the pointed variant.
    pub mu_poly: Option<IntPolynomial>,
    pub char_poly: Option<IntPolynomial>,
    pub whitney_first: Option<Vec<i64>>,
    pub whitney_second: Vec<i64>,
}

pub fn poset_report(p: &Poset, caps: &Caps) -> Result<PosetReport> {
    let weighted = matches!(p.variant(), Variant::Weighted | Variant::WeightedAugmented);
    let unaugmented = matches!(p.variant(), Variant::Weighted | Variant::Pointed);
    let mu_poly = if weighted { Some(mu_polynomial(p, caps)?) } else { None };
    let (char_poly, whitney_first) = if unaugmented {
        (
            Some(characteristic_polynomial(p, caps)?),
            Some(whitney_numbers(p, caps)?.first),
        )
    } else {
        (None, None)
    };
    Ok(PosetReport {
        n: p.ground(),
        variant: p.variant(),
        rank_sizes: p.rank_sizes(),
        mu_poly,
        char_poly,
        whitney_first,
        whitney_second: p.rank_sizes().into_iter().map(|c| c as i64).collect(),
    })
}

/// Rows `n,i,comb,lyndon,liu,rooted` for each `i`.
pub fn family_counts_csv(n: usize, caps: &Caps) -> Result<String> {
    let comb = family_counts(Family::Comb, n, caps)?;
    let lyndon = family_counts(Family::Lyndon, n, caps)?;
    let liu = family_counts(Family::Liu, n, caps)?;
    let rooted = descent_polynomial(n, caps)?;
    let mut s = String::from("n,i,comb,lyndon,liu,rooted\n");
    for i in 0..n {
        s.push_str(&format!("{n},{i},{},{},{},{}\n", comb[i], lyndon[i], liu[i], rooted.coeff(i)));
    }
    Ok(s)
}

/// Hasse diagram with every cover labeled `(a,b)^u`.
pub fn labeled_dot(p: &Poset) -> Result<String> {
    let plain = p.to_dot();
    let mut s = String::with_capacity(plain.len() * 2);
    for line in plain.lines() {
        if let Some((a, b)) = line.trim().trim_end_matches(';').split_once(" -> ") {
            let x: usize = a.trim_start_matches('n').parse().map_err(|_| Error::Internal("dot".into()))?;
            let y: usize = b.trim_start_matches('n').parse().map_err(|_| Error::Internal("dot".into()))?;
            s.push_str(&format!("  n{x} -> n{y} [label=\"{}\"];\n", edge_label(p, x, y)?));
        } else {
            s.push_str(line);
            s.push('\n');
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports() {
        let caps = Caps::default();
        let p = Poset::build(3, Variant::Weighted, &caps).unwrap();
        let r = poset_report(&p, &caps).unwrap();
        assert_eq!(r.rank_sizes, vec![1, 6, 3]);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["variant"], "weighted");
        let csv = family_counts_csv(3, &caps).unwrap();
        assert!(csv.contains("3,1,5,5,5,5"));
        let dot = labeled_dot(&Poset::build(2, Variant::WeightedAugmented, &caps).unwrap()).unwrap();
        assert!(dot.contains("(1,3)^0"));
        assert_eq!("pointed".parse::<Variant>().unwrap(), Variant::Pointed);
    }
}
