//! Structural p-transitivity criteria and the oracle cross-check.
//!
//! Two scheme classes admit a purely structural decision: quasi-thin
//! schemes (every valency at most 2) are p-transitive iff p > 2 or p = 2
//! and the smallest singular subset is all of S; schemes with thin thin
//! residue are p-transitive iff the relations of valency prime to p
//! generate all of S. [`Scheme::decide`] dispatches between these criteria
//! and the GF(p) fixed-space oracle and reports agreement when both run.

use crate::error::{Error, Result};
use crate::modular::require_prime;
use crate::scheme::Scheme;

/// Which decision procedure to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMethod {
    Oracle,
    Structural,
    Both,
}

/// The procedure that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Oracle,
    TheoremA,
    TheoremB,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::TheoremA => "theorem-a",
            Method::TheoremB => "theorem-b",
        })
    }
}

/// Outcome of a p-transitivity decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub prime: u64,
    pub transitive: bool,
    /// The procedure the verdict comes from.
    pub method: Method,
    /// Whether a structural criterion applied to this scheme.
    pub applicable: bool,
    /// Set when both the oracle and a structural criterion ran.
    pub agreement: Option<bool>,
}

impl Scheme {
    /// Every valency is at most 2.
    pub fn is_quasi_thin(&self) -> bool {
        self.max_valency() <= 2
    }

    /// The thin residue is contained in the thin radical.
    pub fn has_thin_thin_residue(&self) -> bool {
        self.thin_residue().is_subset_of(&self.thin_radical())
    }

    /// No valency is divisible by p.
    pub fn is_p_prime_valenced(&self, p: u64) -> Result<bool> {
        require_prime(p)?;
        Ok(self.valencies().iter().all(|&k| k % p != 0))
    }

    /// Quasi-thin criterion: p-transitive iff p > 2, or p = 2 and the
    /// smallest singular subset is all of S.
    pub fn theorem_a_decide(&self, p: u64) -> Result<bool> {
        require_prime(p)?;
        if !self.is_quasi_thin() {
            return Err(Error::NotApplicable(
                "scheme is not quasi-thin".into(),
            ));
        }
        Ok(p > 2 || self.min_singular() == self.full_subset())
    }

    /// Thin-thin-residue criterion: p-transitive iff the closure of S_{p'}
    /// is all of S.
    pub fn theorem_b_decide(&self, p: u64) -> Result<bool> {
        require_prime(p)?;
        if !self.has_thin_thin_residue() {
            return Err(Error::NotApplicable(
                "thin residue is not thin".into(),
            ));
        }
        let gen = self.p_prime_relations(p)?;
        Ok(self.closure(&gen)? == self.full_subset())
    }

    /// Structural verdict and the criterion that produced it. When both
    /// criteria apply they are required to agree; a mismatch would mean a
    /// defect in this library or a corrupt scheme, so it panics rather than
    /// picking a side.
    fn structural_verdict(&self, p: u64) -> Result<(bool, Method)> {
        if self.is_quasi_thin() {
            let a = self.theorem_a_decide(p)?;
            if self.has_thin_thin_residue() {
                let b = self.theorem_b_decide(p)?;
                assert_eq!(
                    a, b,
                    "quasi-thin and thin-thin-residue criteria disagree at p = {p}"
                );
            }
            Ok((a, Method::TheoremA))
        } else if self.has_thin_thin_residue() {
            Ok((self.theorem_b_decide(p)?, Method::TheoremB))
        } else {
            Err(Error::NotApplicable(
                "scheme is neither quasi-thin nor has thin thin residue".into(),
            ))
        }
    }

    /// Decides p-transitivity by the requested method.
    ///
    /// `Oracle` always applies. `Structural` fails with `NotApplicable`
    /// when neither criterion's class predicate holds. `Both` runs the
    /// oracle and, when applicable, the structural criterion, and records
    /// whether they agree; a disagreement is reported, never reconciled.
    pub fn decide(&self, p: u64, method: DecisionMethod) -> Result<Decision> {
        require_prime(p)?;
        match method {
            DecisionMethod::Oracle => Ok(Decision {
                prime: p,
                transitive: self.is_p_transitive_oracle(p)?,
                method: Method::Oracle,
                applicable: true,
                agreement: None,
            }),
            DecisionMethod::Structural => {
                let (verdict, used) = self.structural_verdict(p)?;
                Ok(Decision {
                    prime: p,
                    transitive: verdict,
                    method: used,
                    applicable: true,
                    agreement: None,
                })
            }
            DecisionMethod::Both => {
                let oracle = self.is_p_transitive_oracle(p)?;
                match self.structural_verdict(p) {
                    Ok((structural, used)) => Ok(Decision {
                        prime: p,
                        transitive: oracle,
                        method: used,
                        applicable: true,
                        agreement: Some(oracle == structural),
                    }),
                    Err(Error::NotApplicable(_)) => Ok(Decision {
                        prime: p,
                        transitive: oracle,
                        method: Method::Oracle,
                        applicable: false,
                        agreement: None,
                    }),
                    Err(other) => Err(other),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{scheme_from_relation_matrix, CheckMode, RelationMatrix};

    fn scheme_from_rows(n: usize, rows: &[&str]) -> Scheme {
        let cells = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c.to_digit(10).unwrap()))
            .collect();
        let m = RelationMatrix::new(n, cells).unwrap();
        scheme_from_relation_matrix(&m, CheckMode::Strict).unwrap()
    }

    fn pentagon() -> Scheme {
        scheme_from_rows(5, &["01221", "10122", "21012", "22101", "12210"])
    }

    fn order6_valency4() -> Scheme {
        scheme_from_rows(6, &["012222", "102222", "220122", "221022", "222201", "222210"])
    }

    fn order6_transposed_pair() -> Scheme {
        scheme_from_rows(
            6,
            &["023123", "302312", "230231", "123023", "312302", "231230"],
        )
    }

    /// Order 6 with three thin relations and one of valency 3.
    fn order6_three_thin() -> Scheme {
        scheme_from_rows(
            6,
            &["031323", "303132", "230313", "323031", "132303", "313230"],
        )
    }

    fn cyclic3() -> Scheme {
        scheme_from_rows(3, &["012", "201", "120"])
    }

    #[test]
    fn class_predicates() {
        assert!(order6_transposed_pair().is_quasi_thin());
        assert!(!order6_valency4().is_quasi_thin());
        assert!(cyclic3().is_quasi_thin());

        assert!(order6_three_thin().has_thin_thin_residue());
        assert!(!pentagon().has_thin_thin_residue());
        assert!(cyclic3().has_thin_thin_residue());
    }

    #[test]
    fn p_prime_valenced_predicate() {
        assert!(pentagon().is_p_prime_valenced(3).unwrap());
        assert!(!pentagon().is_p_prime_valenced(2).unwrap());
        assert!(order6_three_thin().is_p_prime_valenced(2).unwrap());
        assert!(matches!(
            pentagon().is_p_prime_valenced(4),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn quasi_thin_criterion() {
        assert!(!order6_transposed_pair().theorem_a_decide(2).unwrap());
        assert!(order6_transposed_pair().theorem_a_decide(3).unwrap());
        assert!(pentagon().theorem_a_decide(2).unwrap());
        assert!(matches!(
            order6_valency4().theorem_a_decide(2),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn thin_thin_residue_criterion() {
        assert!(order6_three_thin().theorem_b_decide(2).unwrap());
        assert!(!order6_transposed_pair().theorem_b_decide(2).unwrap());
        for p in [2u64, 3, 5] {
            assert!(cyclic3().theorem_b_decide(p).unwrap());
        }
        assert!(matches!(
            pentagon().theorem_b_decide(2),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn decide_both_reports_agreement() {
        let s = order6_three_thin();
        let d = s.decide(2, DecisionMethod::Both).unwrap();
        assert!(d.transitive);
        assert!(d.applicable);
        assert_eq!(d.agreement, Some(true));
        assert_eq!(d.method, Method::TheoremB);
    }

    #[test]
    fn decide_structural_on_pentagon() {
        let d = pentagon().decide(2, DecisionMethod::Structural).unwrap();
        assert!(d.transitive);
        assert_eq!(d.method, Method::TheoremA);
        let oracle = pentagon().decide(2, DecisionMethod::Oracle).unwrap();
        assert_eq!(oracle.transitive, d.transitive);
    }

    #[test]
    fn decide_structural_not_applicable() {
        let s = order6_valency4();
        assert!(matches!(
            s.decide(2, DecisionMethod::Structural),
            Err(Error::NotApplicable(_))
        ));
        let both = s.decide(2, DecisionMethod::Both).unwrap();
        assert!(!both.transitive);
        assert!(!both.applicable);
        assert_eq!(both.agreement, None);
        assert_eq!(both.method, Method::Oracle);
    }

    #[test]
    fn decide_rejects_composite_prime() {
        assert!(matches!(
            pentagon().decide(6, DecisionMethod::Both),
            Err(Error::NotPrime(6))
        ));
    }
}
