//! JSON documents for polynomials and maps.
//!
//! Coefficients travel as strings in the coefficient grammar so nothing is
//! ever rounded. Emitted terms are sorted graded-lexicographically, which
//! makes output byte-stable.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use finv_core::{FormalMap, GaussianRational, Monomial, Poly, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDocument {
    pub vars: usize,
    pub trunc: u32,
    pub terms: Vec<TermDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub vars: usize,
    pub trunc: u32,
    pub components: Vec<Vec<TermDocument>>,
}

/// A document that is well-formed JSON but violates the format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentError(pub String);

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DocumentError {}

fn invalid(msg: impl Into<String>) -> DocumentError {
    DocumentError(msg.into())
}

fn terms_to_poly(vars: usize, trunc: u32, terms: &[TermDocument]) -> Result<Poly, DocumentError> {
    let mut seen = HashSet::new();
    let mut poly = Poly::zero(vars);
    for term in terms {
        if term.exps.len() != vars {
            return Err(invalid(format!(
                "exponent vector {:?} has length {}, expected {vars}",
                term.exps,
                term.exps.len()
            )));
        }
        let monomial = Monomial::new(term.exps.iter().copied());
        if monomial.degree() > trunc {
            return Err(invalid(format!(
                "term {:?} has degree {} above trunc {trunc}",
                term.exps,
                monomial.degree()
            )));
        }
        if !seen.insert(monomial.clone()) {
            return Err(invalid(format!("duplicate exponent vector {:?}", term.exps)));
        }
        let coeff: GaussianRational = term.coeff.parse().map_err(|e| invalid(format!("{e}")))?;
        if coeff == GaussianRational::from(0) {
            return Err(invalid(format!("zero coefficient for {:?}", term.exps)));
        }
        poly.add_term(monomial, coeff);
    }
    Ok(poly)
}

fn poly_to_terms(poly: &Poly) -> Vec<TermDocument> {
    poly.sorted_terms()
        .into_iter()
        .map(|(m, c)| TermDocument {
            exps: m.exponents().to_vec(),
            coeff: c.to_string(),
        })
        .collect()
}

fn check_vars(vars: usize) -> Result<(), DocumentError> {
    if vars == 0 {
        return Err(invalid("vars must be positive"));
    }
    Ok(())
}

impl PolyDocument {
    pub fn to_series(&self) -> Result<TruncatedSeries, DocumentError> {
        check_vars(self.vars)?;
        Ok(TruncatedSeries::new(
            terms_to_poly(self.vars, self.trunc, &self.terms)?,
            self.trunc,
        ))
    }

    pub fn from_series(s: &TruncatedSeries) -> Self {
        Self {
            vars: s.nvars(),
            trunc: s.trunc(),
            terms: poly_to_terms(s.poly()),
        }
    }
}

impl MapDocument {
    pub fn to_map(&self) -> Result<FormalMap, DocumentError> {
        check_vars(self.vars)?;
        if self.components.len() != self.vars {
            return Err(invalid(format!(
                "{} components for {} variables",
                self.components.len(),
                self.vars
            )));
        }
        let components = self
            .components
            .iter()
            .map(|terms| {
                terms_to_poly(self.vars, self.trunc, terms)
                    .map(|p| TruncatedSeries::new(p, self.trunc))
            })
            .collect::<Result<Vec<_>, _>>()?;
        FormalMap::new(components).map_err(|e| invalid(e.to_string()))
    }

    pub fn from_map(m: &FormalMap) -> Self {
        Self {
            vars: m.nvars(),
            trunc: m.trunc(),
            components: m.components().iter().map(|c| poly_to_terms(c.poly())).collect(),
        }
    }
}
