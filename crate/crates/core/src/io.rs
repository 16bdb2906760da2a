//! JSON documents for the exact objects.
//!
//! Integers are written as JSON integers (they must fit in i64); rational
//! vertex coordinates are written as strings `"p/q"` so they survive a
//! round trip exactly. Lineality directions of a cell are written as a pair
//! of opposite rays.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational::{format_rational, is_zero, parse_rational, QVector};
use crate::lattice::IntVector;
use crate::polyhedra::{BalancingReport, Cone, Fan, Polyhedron, WeightedComplex};
use crate::toric::Orbit;
use crate::tropical::{ComplexPolynomial, TropicalPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    pub rays: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
    pub cones: Vec<ConeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub rays: Vec<IntVector>,
    pub weight: i64,
    /// Omitted for cones with apex at the origin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
    pub dim: usize,
    pub cells: Vec<CellJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balanced: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub face: CellJson,
    pub residual: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceJson {
    pub balanced: bool,
    pub violations: Vec<ViolationJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TropicalTermJson {
    pub exp: Vec<i64>,
    pub coeff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TropicalPolyJson {
    pub terms: Vec<TropicalTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexTermJson {
    pub exp: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPolyJson {
    pub terms: Vec<ComplexTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub cone_index: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitListJson {
    pub cones: Vec<ConeJson>,
    pub orbits: Vec<OrbitJson>,
}

/// Either kind of polynomial document, told apart by the term fields.
#[derive(Clone, Debug, PartialEq)]
pub enum PolynomialDoc {
    Tropical(TropicalPolynomial),
    Complex(ComplexPolynomial),
}

fn int(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Parse(format!("integer {x} does not fit in i64")))
}

fn infer_ambient(explicit: Option<usize>, mut lengths: impl Iterator<Item = usize>, what: &str) -> Result<usize> {
    match explicit {
        Some(n) => Ok(n),
        None => lengths
            .next()
            .ok_or_else(|| Error::Parse(format!("{what}: cannot infer the ambient dimension; add \"ambient\""))),
    }
    .and_then(|n| {
        if n == 0 {
            Err(Error::Parse(format!("{what}: ambient dimension must be positive")))
        } else {
            Ok(n)
        }
    })
}

fn check_len(n: usize, v: &IntVector) -> Result<()> {
    if v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    Ok(())
}

impl ConeJson {
    pub fn from_cone(c: &Cone) -> Self {
        ConeJson { rays: c.generators() }
    }

    pub fn to_cone(&self, ambient: usize) -> Result<Cone> {
        for r in &self.rays {
            check_len(ambient, r)?;
        }
        Cone::from_rays(ambient, &self.rays)
    }
}

impl FanJson {
    pub fn from_fan(f: &Fan) -> Self {
        FanJson {
            ambient: Some(f.ambient()),
            cones: f.maximal_cones().iter().map(ConeJson::from_cone).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<Fan> {
        let n = infer_ambient(self.ambient, self.cones.iter().flat_map(|c| c.rays.iter().map(IntVector::dim)), "fan")?;
        let cones = self.cones.iter().map(|c| c.to_cone(n)).collect::<Result<Vec<_>>>()?;
        Fan::new(n, cones)
    }
}

impl CellJson {
    pub fn from_cell(p: &Polyhedron, weight: &BigInt) -> Result<Self> {
        let mut rays: Vec<IntVector> = p.rays().to_vec();
        for l in p.lineality() {
            rays.push(l.clone());
            rays.push(-l);
        }
        let vertices = if p.vertices().len() == 1 && is_zero(&p.vertices()[0]) {
            None
        } else {
            Some(p.vertices().iter().map(|v| v.iter().map(format_rational).collect()).collect())
        };
        Ok(CellJson {
            rays,
            weight: int(weight)?,
            vertices,
        })
    }

    pub fn to_cell(&self, ambient: usize) -> Result<(Polyhedron, BigInt)> {
        for r in &self.rays {
            check_len(ambient, r)?;
        }
        let points: Vec<QVector> = match &self.vertices {
            None => vec![vec![Default::default(); ambient]],
            Some(vs) => vs
                .iter()
                .map(|v| {
                    if v.len() != ambient {
                        return Err(Error::DimensionMismatch {
                            expected: ambient,
                            found: v.len(),
                        });
                    }
                    v.iter()
                        .map(|s| parse_rational(s).ok_or_else(|| Error::Parse(format!("bad rational `{s}`"))))
                        .collect()
                })
                .collect::<Result<_>>()?,
        };
        let rays: Vec<QVector> = self.rays.iter().map(IntVector::to_rational).collect();
        let p = Polyhedron::from_generators(ambient, &points, &rays, &[])
            .ok_or_else(|| Error::Parse("cell has no vertices".into()))?;
        Ok((p, BigInt::from(self.weight)))
    }
}

impl ComplexJson {
    pub fn from_complex(c: &WeightedComplex, balanced: Option<bool>) -> Result<Self> {
        Ok(ComplexJson {
            ambient: Some(c.ambient()),
            dim: c.dim(),
            cells: c.cells().iter().map(|(p, w)| CellJson::from_cell(p, w)).collect::<Result<_>>()?,
            balanced,
        })
    }

    pub fn to_complex(&self) -> Result<WeightedComplex> {
        let lengths = self.cells.iter().flat_map(|c| {
            c.rays
                .iter()
                .map(IntVector::dim)
                .chain(c.vertices.iter().flat_map(|vs| vs.iter().map(Vec::len)))
        });
        let n = infer_ambient(self.ambient, lengths, "complex")?;
        let cells = self.cells.iter().map(|c| c.to_cell(n)).collect::<Result<Vec<_>>>()?;
        WeightedComplex::new(n, self.dim, cells)
    }
}

impl BalanceJson {
    pub fn from_report(r: &BalancingReport) -> Result<Self> {
        Ok(BalanceJson {
            balanced: r.balanced,
            violations: r
                .violations
                .iter()
                .map(|v| {
                    Ok(ViolationJson {
                        face: CellJson::from_cell(&v.face, &BigInt::from(1))?,
                        residual: v.residual.clone(),
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

impl TropicalPolyJson {
    pub fn from_poly(q: &TropicalPolynomial) -> Result<Self> {
        Ok(TropicalPolyJson {
            terms: q
                .terms()
                .map(|(e, c)| {
                    Ok(TropicalTermJson {
                        exp: e.coords().iter().map(int).collect::<Result<_>>()?,
                        coeff: c,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_poly(&self) -> Result<TropicalPolynomial> {
        let n = infer_ambient(None, self.terms.iter().map(|t| t.exp.len()), "tropical polynomial")?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                if t.exp.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: t.exp.len(),
                    });
                }
                Ok((IntVector::from_i64(&t.exp), t.coeff))
            })
            .collect::<Result<Vec<_>>>()?;
        TropicalPolynomial::new(n, terms)
    }
}

impl ComplexPolyJson {
    pub fn from_poly(f: &ComplexPolynomial) -> Result<Self> {
        Ok(ComplexPolyJson {
            terms: f
                .terms()
                .map(|(e, c)| {
                    Ok(ComplexTermJson {
                        exp: e.coords().iter().map(int).collect::<Result<_>>()?,
                        re: c.re,
                        im: c.im,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_poly(&self) -> Result<ComplexPolynomial> {
        let n = infer_ambient(None, self.terms.iter().map(|t| t.exp.len()), "complex polynomial")?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                if t.exp.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: t.exp.len(),
                    });
                }
                if !t.re.is_finite() || !t.im.is_finite() {
                    return Err(Error::Parse("coefficients must be finite".into()));
                }
                Ok((IntVector::from_i64(&t.exp), Complex64::new(t.re, t.im)))
            })
            .collect::<Result<Vec<_>>>()?;
        ComplexPolynomial::new(n, terms)
    }
}

impl OrbitListJson {
    pub fn from_orbits(orbits: &[Orbit]) -> Self {
        OrbitListJson {
            cones: orbits.iter().map(|o| ConeJson::from_cone(&o.cone)).collect(),
            orbits: orbits
                .iter()
                .enumerate()
                .map(|(i, o)| OrbitJson {
                    cone_index: i,
                    dim: o.dim,
                })
                .collect(),
        }
    }
}

/// Turns a serde_json failure into a one-line message with line and column.
pub fn json_error(source: &str, e: &serde_json::Error) -> Error {
    Error::Parse(format!("{source}:{}:{}: {e}", e.line(), e.column()))
}

/// Parses either polynomial document. Terms carrying `coeff` make a
/// tropical polynomial, terms carrying `re`/`im` a complex one.
pub fn parse_polynomial(source: &str, text: &str) -> Result<PolynomialDoc> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| json_error(source, &e))?;
    let first = value
        .get("terms")
        .and_then(|t| t.as_array())
        .and_then(|t| t.first())
        .ok_or_else(|| Error::Parse(format!("{source}: expected a non-empty \"terms\" array")))?;
    if first.get("coeff").is_some() {
        let doc: TropicalPolyJson = serde_json::from_str(text).map_err(|e| json_error(source, &e))?;
        Ok(PolynomialDoc::Tropical(doc.to_poly()?))
    } else {
        let doc: ComplexPolyJson = serde_json::from_str(text).map_err(|e| json_error(source, &e))?;
        Ok(PolynomialDoc::Complex(doc.to_poly()?))
    }
}

/// Deserializes `text` as `T`, reporting line and column on failure.
pub fn parse_json<T: for<'de> Deserialize<'de>>(source: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| json_error(source, &e))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::common_refinement;
    use crate::toric::orbits;
    use crate::tropical::{tropical_hypersurface, tropicalize_poly, uniform_bergman_fan};

    fn line() -> ComplexPolynomial {
        ComplexPolynomial::from_real(2, &[(&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 1.0)]).unwrap()
    }

    #[test]
    fn hypersurface_document() {
        let cyc = tropical_hypersurface(&tropicalize_poly(&line())).unwrap();
        let doc = ComplexJson::from_complex(cyc.complex(), Some(true)).unwrap();
        let text = to_json(&doc).unwrap();
        let back: ComplexJson = parse_json("t", &text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_complex().unwrap(), *cyc.complex());
        let mut rays: Vec<Vec<i64>> = doc.cells.iter().map(|c| c.rays[0].to_i64().unwrap()).collect();
        rays.sort();
        assert_eq!(rays, vec![vec![-1, -1], vec![0, 1], vec![1, 0]]);
        assert!(doc.cells.iter().all(|c| c.weight == 1 && c.vertices.is_none()));
    }

    #[test]
    fn affine_cells_keep_exact_vertices() {
        let q = TropicalPolynomial::from_i64(2, &[(&[1, 0], 0.5), (&[0, 1], 0.0), (&[0, 0], 0.0)]).unwrap();
        let cyc = tropical_hypersurface(&q).unwrap();
        let doc = ComplexJson::from_complex(cyc.complex(), None).unwrap();
        assert!(doc.cells.iter().any(|c| c.vertices.as_ref().is_some_and(|v| v[0].contains(&"-1/2".to_string()))));
        assert_eq!(parse_json::<ComplexJson>("t", &to_json(&doc).unwrap()).unwrap().to_complex().unwrap(), *cyc.complex());
    }

    #[test]
    fn lineality_round_trips() {
        let c = WeightedComplex::from_cones(2, 1, &[(vec![IntVector::from_i64(&[1, 1]), IntVector::from_i64(&[-1, -1])], 3)]).unwrap();
        let doc = ComplexJson::from_complex(&c, None).unwrap();
        assert_eq!(doc.cells[0].rays.len(), 2);
        assert_eq!(doc.to_complex().unwrap(), c);
    }

    #[test]
    fn bergman_and_fans_round_trip() {
        for (p, n) in [(1, 2), (2, 3), (2, 4)] {
            let b = uniform_bergman_fan(p, n).unwrap();
            let doc = ComplexJson::from_complex(b.complex(), Some(true)).unwrap();
            assert_eq!(parse_json::<ComplexJson>("t", &to_json(&doc).unwrap()).unwrap().to_complex().unwrap(), *b.complex());
        }
        let p2 = Fan::projective_space(2).unwrap();
        let doc = FanJson::from_fan(&p2);
        assert_eq!(parse_json::<FanJson>("t", &to_json(&doc).unwrap()).unwrap().to_fan().unwrap(), p2);
        let r = common_refinement(&p2, &Fan::product_of_lines(2).unwrap()).unwrap();
        assert_eq!(FanJson::from_fan(&r).to_fan().unwrap(), r);
    }

    #[test]
    fn ambient_is_inferred_or_required() {
        let doc: FanJson = parse_json("t", r#"{"cones":[{"rays":[[1,0]]},{"rays":[[0,1]]}]}"#).unwrap();
        assert_eq!(doc.to_fan().unwrap().ambient(), 2);
        let bare: FanJson = parse_json("t", r#"{"cones":[{"rays":[]}]}"#).unwrap();
        assert!(bare.to_fan().is_err());
        let given: FanJson = parse_json("t", r#"{"ambient":3,"cones":[{"rays":[]}]}"#).unwrap();
        assert_eq!(given.to_fan().unwrap(), Fan::trivial(3));
        let ragged: FanJson = parse_json("t", r#"{"cones":[{"rays":[[1,0],[0,1,0]]}]}"#).unwrap();
        assert!(matches!(ragged.to_fan(), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn polynomials() {
        let text = to_json(&ComplexPolyJson::from_poly(&line()).unwrap()).unwrap();
        assert_eq!(parse_polynomial("t", &text).unwrap(), PolynomialDoc::Complex(line()));
        let q = tropicalize_poly(&line());
        let text = to_json(&TropicalPolyJson::from_poly(&q).unwrap()).unwrap();
        assert_eq!(parse_polynomial("t", &text).unwrap(), PolynomialDoc::Tropical(q));
        assert!(parse_polynomial("t", r#"{"terms":[{"exp":[-1],"re":1.0,"im":0.0}]}"#).is_err());
        assert!(parse_polynomial("t", r#"{"terms":[]}"#).is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_polynomial("f.json", "{\n  \"terms\": [\n    {\"exp\": [1,}\n]}").unwrap_err();
        let Error::Parse(msg) = err else { panic!() };
        assert!(msg.starts_with("f.json:3:"), "{msg}");
    }

    #[test]
    fn orbit_listing() {
        let os = orbits(&Fan::projective_space(2).unwrap()).unwrap();
        let doc = OrbitListJson::from_orbits(&os);
        assert_eq!(doc.orbits.len(), 7);
        assert_eq!(doc.cones[0].rays.len(), 0);
        assert_eq!(parse_json::<OrbitListJson>("t", &to_json(&doc).unwrap()).unwrap(), doc);
    }

    #[test]
    fn balance_report_residual() {
        let c = WeightedComplex::from_cones(2, 1, &[(vec![IntVector::from_i64(&[1, 0])], 1), (vec![IntVector::from_i64(&[0, 1])], 1)]).unwrap();
        let doc = BalanceJson::from_report(&c.check_balancing()).unwrap();
        assert!(!doc.balanced);
        assert_eq!(doc.violations.len(), 1);
        assert_eq!(doc.violations[0].residual, IntVector::from_i64(&[1, 1]));
    }
}
