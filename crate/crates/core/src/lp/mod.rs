//! Exact linear programs bounding the number of III-reductions on a search
//! path, with primal/dual certificate checks.
//!
//! Each program is `max Σ nᵢ·depthᵢ` over `n ≥ 0` with the edge column summing
//! to exactly 1 and every other column (vertex degrees, forces) summing to at
//! least 0. A dual vector `y` has a free edge weight and non-positive weights
//! elsewhere; it certifies the value `y_e` when every row satisfies
//! `depth ≤ Σₖ yₖ·coefficientₖ`.

mod simplex;
mod tables;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use tables::{
    lp_alpha_table, lp_alpha_table4, table_a, table_b, table_b4, EffectRow, EffectTable, COLUMNS,
};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parse "a", "-a" or "a/b".
pub fn rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse()
        .map_err(|_| Error::AlphaOutOfRange(format!("{s:?} is not a rational number")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    /// Weight per table row.
    pub primal: Vec<Rational>,
    /// Weight per constraint: edge equality first.
    pub dual: Vec<Rational>,
}

impl LpSolution {
    /// Primal feasible, dual feasible and equal objective values.
    pub fn certifies(&self, table: &EffectTable) -> bool {
        let objective: Rational = table
            .rows
            .iter()
            .zip(&self.primal)
            .map(|(r, x)| &r.depth * x)
            .sum();
        objective == self.value
            && primal_feasible(table, &self.primal)
            && verify_dual(table, &self.dual, &self.value)
    }
}

pub fn primal_feasible(table: &EffectTable, weights: &[Rational]) -> bool {
    if weights.len() != table.rows.len() || weights.iter().any(Signed::is_negative) {
        return false;
    }
    (0..table.num_constraints()).all(|k| {
        let s: Rational = table
            .rows
            .iter()
            .zip(weights)
            .map(|(r, x)| &r.coefficients()[k] * x)
            .sum();
        if k == 0 {
            s == Rational::from_integer(1.into())
        } else {
            !s.is_negative()
        }
    })
}

pub fn lp_maximize(table: &EffectTable) -> Result<LpSolution> {
    let rows = table.rows.len();
    let k = table.num_constraints();
    let coeffs: Vec<Vec<Rational>> = table.rows.iter().map(EffectRow::coefficients).collect();
    let mut a = vec![vec![Rational::zero(); rows + k - 1]; k];
    for (j, c) in coeffs.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            a[i][j] = v.clone();
        }
    }
    for i in 1..k {
        a[i][rows + i - 1] = -Rational::from_integer(1.into());
    }
    let mut b = vec![Rational::zero(); k];
    b[0] = Rational::from_integer(1.into());
    let mut c: Vec<Rational> = table.rows.iter().map(|r| r.depth.clone()).collect();
    c.resize(rows + k - 1, Rational::zero());
    let opt = simplex::maximize(&a, &b, &c)?;
    Ok(LpSolution {
        value: opt.value,
        primal: opt.x[..rows].to_vec(),
        dual: opt.y,
    })
}

/// Whether `y` is a dual certificate for `table` with value `target`.
pub fn verify_dual(table: &EffectTable, y: &[Rational], target: &Rational) -> bool {
    y.len() == table.num_constraints()
        && y[0] == *target
        && !y[1..].iter().any(Signed::is_positive)
        && table.rows.iter().all(|r| {
            let s: Rational = r.coefficients().iter().zip(y).map(|(c, w)| c * w).sum();
            r.depth <= s
        })
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_negative() || *alpha > rat(1, 5) {
        Err(Error::AlphaOutOfRange(alpha.to_string()))
    } else {
        Ok(())
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Optimum of [`lp_alpha_table`] for `alpha` in `[0, 1/5]`.
pub fn beta_of_alpha(alpha: &Rational) -> Result<Rational> {
    check_alpha(alpha)?;
    Ok(if *alpha >= rat(1, 9) {
        rat(7, 50) + rat(3, 10) * alpha
    } else {
        rat(13, 75)
    })
}

/// Optimum of [`lp_alpha_table4`] for `alpha` in `[0, 1/5]`.
pub fn beta4_of_alpha(alpha: &Rational) -> Result<Rational> {
    check_alpha(alpha)?;
    Ok(if *alpha >= rat(1, 9) {
        rat(1, 8) + rat(3, 8) * alpha
    } else {
        rat(1, 6)
    })
}

/// Edge, degree-4, degree-3, degree-2, degree-1 weights certifying 1/5 for
/// [`table_a`].
pub fn dual_a() -> Vec<Rational> {
    vec![rat(1, 5), rat(0, 1), rat(-1, 20), rat(-1, 5), rat(-1, 10)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        rational(s).unwrap()
    }

    #[test]
    fn table_optima() {
        for (t, v) in [(table_a(), "1/5"), (table_b(), "19/100"), (table_b4(), "3/16")] {
            let sol = lp_maximize(&t).unwrap();
            assert_eq!(sol.value, q(v), "table {}", t.name);
            assert!(sol.certifies(&t));
        }
    }

    #[test]
    fn known_duals() {
        assert!(verify_dual(&table_a(), &dual_a(), &q("1/5")));
        assert!(!verify_dual(&table_a(), &dual_a(), &q("1/6")));
        // Magnitudes (1/200, 7/200, 3/20) with zero degree-2/1 weights certify
        // nothing for table B, whatever the signs: the degree-3 half-edge row
        // needs forces ≥ -3/25 while the forcing rows need forces ≤ -1/8.
        let t = table_b();
        for signs in 0..8 {
            let s = |bit: i32| if signs & (1 << bit) == 0 { "" } else { "-" };
            let y = [
                q("19/100"),
                q(&format!("{}1/200", s(0))),
                q(&format!("{}7/200", s(1))),
                q("0"),
                q("0"),
                q(&format!("{}3/20", s(2))),
            ];
            assert!(!verify_dual(&t, &y, &q("19/100")));
        }
        let y = ["19/100", "-1/200", "-7/200", "-1/400", "0", "-1/8"].map(q);
        assert!(verify_dual(&t, &y, &q("19/100")));
    }

    #[test]
    fn edge_weight_alone_is_not_a_certificate() {
        let t = table_a();
        let y = [q("1/5"), q("0"), q("0"), q("0"), q("0")];
        assert!(!verify_dual(&t, &y, &q("1/5")));
        let violated: Vec<_> = t
            .rows
            .iter()
            .filter(|r| r.depth > r.coefficients().iter().zip(&y).map(|(c, w)| c * w).sum())
            .map(|r| r.label.as_str())
            .collect();
        assert!(violated.contains(&"3|0300"));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(beta_of_alpha(&q("1/9")).unwrap(), q("13/75"));
        assert_eq!(beta4_of_alpha(&q("1/9")).unwrap(), q("1/6"));
        assert_eq!(beta_of_alpha(&q("1/5")).unwrap(), q("1/5"));
        assert_eq!(beta_of_alpha(&q("1/7")).unwrap(), q("7/50") + q("3/70"));
        assert!(beta_of_alpha(&q("1/4")).is_err());
        assert!(beta4_of_alpha(&q("-1/100")).is_err());
    }

    #[test]
    fn alpha_family_matches_closed_form() {
        for a in ["0", "1/20", "1/9", "1/8", "1/7", "1/6", "1/5"] {
            let alpha = q(a);
            let sol = lp_maximize(&lp_alpha_table(&alpha).unwrap()).unwrap();
            assert_eq!(sol.value, beta_of_alpha(&alpha).unwrap(), "alpha {a}");
            let sol4 = lp_maximize(&lp_alpha_table4(&alpha).unwrap()).unwrap();
            assert_eq!(sol4.value, beta4_of_alpha(&alpha).unwrap(), "alpha {a}");
        }
    }
}
