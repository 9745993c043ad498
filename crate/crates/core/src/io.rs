//! JSON file formats. Field elements travel as `"p/q"` strings.

use serde::{Deserialize, Serialize};

use crate::bundle::{BundleAnalysis, BundleKind, ProjectionCenter};
use crate::error::{BundleError, FormError};
use crate::field::Field;
use crate::forms::{BinaryForm, DualForm, WaringTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `a_d` with `f = sum C(n,d) a_d x0^(n-d) x1^d`.
    #[default]
    Catalecticant,
    /// Plain coefficients of `x0^(n-d) x1^d`.
    Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    #[serde(default)]
    pub basis: Basis,
    pub coeffs: Vec<String>,
}

impl FormJson {
    pub fn to_form<F: Field>(&self, field: &F) -> Result<BinaryForm<F>, FormError> {
        if self.coeffs.len() != self.n + 1 {
            return Err(FormError::CoefficientCount {
                expected: self.n + 1,
                found: self.coeffs.len(),
            });
        }
        let values = self.coeffs.iter().map(|c| field.parse(c)).collect::<Result<Vec<_>, _>>()?;
        match self.basis {
            Basis::Catalecticant => Ok(BinaryForm::new(field, values)),
            Basis::Monomial => BinaryForm::from_monomial(field, values),
        }
    }

    pub fn from_form<F: Field>(f: &BinaryForm<F>) -> Self {
        Self {
            n: f.degree(),
            basis: Basis::Catalecticant,
            coeffs: f.coords().iter().map(|c| f.field().format(c)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualFormJson {
    pub e: usize,
    /// Coefficients `b_j` of `d0^(e-j) d1^j`.
    pub coeffs: Vec<String>,
    /// Human-readable rendering in `d0`, `d1`.
    pub display: String,
}

impl DualFormJson {
    pub fn from_dual<F: Field>(phi: &DualForm<F>) -> Self {
        Self {
            e: phi.degree(),
            coeffs: phi.coeffs().iter().map(|c| phi.field().format(c)).collect(),
            display: phi.as_poly().display_with("d0", "d1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterJson {
    pub n: usize,
    pub k: usize,
    pub field: String,
    pub points: Vec<FormJson>,
}

impl CenterJson {
    pub fn to_center<F: Field>(&self, field: &F) -> Result<ProjectionCenter<F>, BundleError> {
        if self.points.len() != self.k {
            return Err(BundleError::InvalidCenter(format!("k = {} but {} points given", self.k, self.points.len())));
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                if p.n != self.n {
                    return Err(BundleError::InvalidCenter(format!("point of degree {} in a center with n = {}", p.n, self.n)));
                }
                Ok(p.to_form(field)?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        ProjectionCenter::new(field, points)
    }

    pub fn from_center<F: Field>(c: &ProjectionCenter<F>) -> Self {
        Self {
            n: c.n(),
            k: c.k(),
            field: c.field().tag().to_string(),
            points: c.points().iter().map(FormJson::from_form).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReportJson {
    pub kind: BundleKind,
    pub summands: Vec<usize>,
    pub rank: usize,
    pub h_ladder: Vec<usize>,
    pub ordinary: bool,
}

impl SplittingReportJson {
    pub fn from_analysis(a: &BundleAnalysis) -> Self {
        Self {
            kind: a.splitting.kind,
            summands: a.splitting.summands.clone(),
            rank: a.rank,
            h_ladder: a.ladder.h.clone(),
            ordinary: true,
        }
    }
}

/// Several forms of one degree, for simultaneous apolarity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimultaneousJson {
    #[serde(default)]
    pub field: Option<String>,
    pub forms: Vec<FormJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaringTermJson {
    pub coefficient: String,
    /// The linear form `a0 x0 + a1 x1` as `[a0, a1]`.
    pub linear_form: [String; 2],
    pub power: usize,
}

impl WaringTermJson {
    pub fn from_term<F: Field>(field: &F, t: &WaringTerm<F>) -> Self {
        Self {
            coefficient: field.format(&t.coefficient),
            linear_form: [field.format(&t.power.a0), field.format(&t.power.a1)],
            power: t.power.n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn monomial_basis_conversion() {
        let j: FormJson = serde_json::from_str(r#"{"n": 4, "basis": "monomial", "coeffs": ["0","0","1","0","0"]}"#).unwrap();
        let f = j.to_form(&Rationals).unwrap();
        assert_eq!(FormJson::from_form(&f).coeffs, vec!["0", "0", "1/6", "0", "0"]);
        let back = FormJson::from_form(&f).to_form(&Rationals).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_forms() {
        let short = FormJson { n: 3, basis: Basis::Catalecticant, coeffs: vec!["1".into()] };
        assert!(matches!(short.to_form(&Rationals), Err(FormError::CoefficientCount { expected: 4, found: 1 })));
        let junk = FormJson { n: 0, basis: Basis::Catalecticant, coeffs: vec!["x".into()] };
        assert!(junk.to_form(&Rationals).is_err());
        let f7 = PrimeField::new(7).unwrap();
        let den = FormJson { n: 0, basis: Basis::Catalecticant, coeffs: vec!["1/7".into()] };
        assert!(den.to_form(&f7).is_err());
    }

    #[test]
    fn center_round_trip() {
        let text = r#"{"n": 5, "k": 2, "field": "Q",
            "points": [{"n": 5, "coeffs": ["2","1","1","1","1","2"]},
                       {"n": 5, "coeffs": ["3","2","2","2","2","1"]}]}"#;
        let j: CenterJson = serde_json::from_str(text).unwrap();
        let c = j.to_center(&Rationals).unwrap();
        assert_eq!(CenterJson::from_center(&c), j);
        let dup = CenterJson { points: vec![j.points[0].clone(), j.points[0].clone()], ..j.clone() };
        assert!(matches!(dup.to_center(&Rationals), Err(BundleError::InvalidCenter(_))));
    }
}
