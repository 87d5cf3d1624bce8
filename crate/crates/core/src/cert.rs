//! Self-contained certificates: the claim, the instance, the inputs, the
//! witness payload and the residuals it achieved, sealed with a SHA-256
//! digest of the canonical JSON. [`certify`] checks the digest and
//! re-evaluates the claim from the payload alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{Element, Field, Instance, Spectrum, Tuple};
use crate::error::{Error, Result};
use crate::io::{tuple_from_values, tuple_values, InstanceDescriptor, MatrixValues, Values};
use crate::matrices::{det_residual, ExpProduct, MatrixOverA};
use crate::reduce::{
    verify_exp_reducibility, verify_principal, ExpReducibilityWitness, ExtensionTrace,
    IrreducibleReport, PrincipalObstruction, PrincipalWitness, ReductionWitness, RowExtension,
};
use crate::topology::{
    complement_components, hole_condition_with, hole_windings, sublevel_zero_set, winding_number,
    HoleConditionResult, HoleWinding,
};

pub const CERTIFICATE_SCHEMA: &str = "banach-reduce/certificate/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `f + a g` is invertible.
    Reducible,
    /// No `a` makes `f + a g` invertible.
    Irreducible,
    /// `f + a g = e_1 prod exp(L_j)`.
    Principal,
    /// No `a` puts `f + a g` in the principal component.
    NotPrincipal,
    /// `u W = e_1` with `W = prod exp(L_j)` of determinant one.
    RowExtension,
    /// `sum e^{x_j} (a_j + b_j g) = 1`.
    ExpReducible,
    /// `prod exp(L_j)` equals the target matrix.
    ExpProduct,
    /// The hole condition for `Z = {|g| <= eps}` inside the domain.
    HoleCondition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub f: Vec<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Values>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Reduction {
        a: Vec<Values>,
        eps: f64,
        trace: ExtensionTrace,
    },
    Principal {
        a: Vec<Values>,
        logs: Vec<MatrixValues>,
    },
    RowExtension {
        x: Vec<Values>,
        logs: Vec<MatrixValues>,
    },
    ExpReducibility {
        x: Vec<Values>,
        b: Vec<Values>,
    },
    ExpProduct {
        logs: Vec<MatrixValues>,
        target: MatrixValues,
    },
    /// The zero-set threshold an obstruction was found at.
    ZeroSet {
        eps: f64,
    },
    HoleCondition {
        eps: f64,
        result: HoleConditionResult,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObstructionReport {
    /// Windings of `f` around holes of the zero set (or around the circle).
    Winding { windings: Vec<HoleWinding> },
    /// A zero-set point where a real `f` is not positive.
    NonPositive { point: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub claim: Claim,
    pub instance: InstanceDescriptor,
    pub inputs: Inputs,
    pub witness: Witness,
    pub tolerance: f64,
    pub residuals: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionReport>,
    pub digest: String,
}

/// One re-evaluated quantity and whether it meets the claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub claim: Claim,
    pub digest_ok: bool,
    pub checks: BTreeMap<String, Check>,
    pub ok: bool,
}

fn scale_of(f: &Tuple, g: Option<&Element>) -> f64 {
    1.0 + f.sup_norm().max(g.map_or(0.0, Element::sup_norm))
}

fn principal_limit(v: &Tuple) -> f64 {
    1e-8 * (1.0 + v.sup_norm())
}

fn exp_reducibility_limit(x: &Tuple, v: &Tuple) -> f64 {
    let big = x
        .coords()
        .iter()
        .map(|x| x.exp().sup_norm())
        .fold(1.0, f64::max);
    1e-8 * big * (1.0 + v.sup_norm())
}

fn exp_product_limit(target: &MatrixOverA) -> f64 {
    1e-8 * (1.0 + target.sup_norm())
}

/// The stored tolerance, never looser than the claim's own limit.
fn capped(stored: f64, limit: f64) -> f64 {
    if stored.is_finite() {
        stored.min(limit)
    } else {
        limit
    }
}

fn logs_values(e: &ExpProduct) -> Vec<MatrixValues> {
    e.factors.iter().map(MatrixValues::of).collect()
}

fn logs_from(owner: &Instance, logs: &[MatrixValues]) -> Result<ExpProduct> {
    Ok(ExpProduct::new(
        logs.iter()
            .map(|m| m.to_matrix(owner))
            .collect::<Result<Vec<_>>>()?,
    ))
}

fn upper(value: f64, limit: f64) -> Check {
    Check {
        value,
        limit,
        pass: value <= limit,
    }
}

fn lower(value: f64, limit: f64) -> Check {
    Check {
        value,
        limit,
        pass: value > limit,
    }
}

fn flag(pass: bool) -> Check {
    Check {
        value: if pass { 1.0 } else { 0.0 },
        limit: 1.0,
        pass,
    }
}

impl Certificate {
    fn assemble(
        claim: Claim,
        f: &Tuple,
        g: Option<&Element>,
        witness: Witness,
        tolerance: f64,
        obstruction: Option<ObstructionReport>,
    ) -> Result<Self> {
        let owner = f
            .coords()
            .first()
            .map(|e| e.owner().clone())
            .or_else(|| g.map(|g| g.owner().clone()))
            .ok_or_else(|| Error::InvalidWitness("certificate without inputs".into()))?;
        let mut cert = Certificate {
            schema: CERTIFICATE_SCHEMA.to_string(),
            claim,
            instance: InstanceDescriptor::of(&owner),
            inputs: Inputs {
                f: tuple_values(f),
                g: g.map(Values::of),
            },
            witness,
            tolerance,
            residuals: BTreeMap::new(),
            obstruction,
            digest: String::new(),
        };
        let checks = evaluate(&cert, &owner)?;
        if let Some((name, c)) = checks.iter().find(|(_, c)| !c.pass) {
            return Err(Error::InvalidWitness(format!(
                "{name} = {:e} against {:e}",
                c.value, c.limit
            )));
        }
        cert.residuals = checks.into_iter().map(|(k, c)| (k, c.value)).collect();
        cert.seal()?;
        Ok(cert)
    }

    pub fn reduction(f: &Tuple, g: &Element, w: &ReductionWitness, tol: f64) -> Result<Self> {
        Self::assemble(
            Claim::Reducible,
            f,
            Some(g),
            Witness::Reduction {
                a: tuple_values(&w.a),
                eps: w.eps,
                trace: w.trace.clone(),
            },
            tol,
            None,
        )
    }

    pub fn irreducible(f: &Tuple, g: &Element, report: &IrreducibleReport) -> Result<Self> {
        Self::assemble(
            Claim::Irreducible,
            f,
            Some(g),
            Witness::ZeroSet { eps: report.eps },
            0.0,
            Some(ObstructionReport::Winding {
                windings: report.obstruction.windings.clone(),
            }),
        )
    }

    pub fn principal(f: &Tuple, g: &Element, w: &PrincipalWitness) -> Result<Self> {
        let v = f.add_scaled(g, &w.a)?;
        Self::assemble(
            Claim::Principal,
            f,
            Some(g),
            Witness::Principal {
                a: tuple_values(&w.a),
                logs: logs_values(&w.logs),
            },
            principal_limit(&v),
            None,
        )
    }

    pub fn not_principal(
        f: &Tuple,
        g: &Element,
        eps: f64,
        obstruction: &PrincipalObstruction,
    ) -> Result<Self> {
        let (claim, report) = match obstruction {
            PrincipalObstruction::Winding(o) => (
                Claim::NotPrincipal,
                ObstructionReport::Winding {
                    windings: o.windings.clone(),
                },
            ),
            PrincipalObstruction::Irreducible(o) => (
                Claim::Irreducible,
                ObstructionReport::Winding {
                    windings: o.windings.clone(),
                },
            ),
            PrincipalObstruction::NonPositive { point, value } => (
                Claim::NotPrincipal,
                ObstructionReport::NonPositive {
                    point: *point,
                    value: *value,
                },
            ),
        };
        Self::assemble(
            claim,
            f,
            Some(g),
            Witness::ZeroSet { eps },
            0.0,
            Some(report),
        )
    }

    /// Certificate for the row `u = (f, g)`.
    pub fn row_extension(f: &Tuple, g: &Element, x: &Tuple, ext: &RowExtension) -> Result<Self> {
        Self::assemble(
            Claim::RowExtension,
            f,
            Some(g),
            Witness::RowExtension {
                x: tuple_values(x),
                logs: logs_values(&ext.logs),
            },
            1e-8 * scale_of(f, Some(g)),
            None,
        )
    }

    pub fn exp_reducibility(a: &Tuple, g: &Element, w: &ExpReducibilityWitness) -> Result<Self> {
        let v = a.add_scaled(g, &w.b)?;
        Self::assemble(
            Claim::ExpReducible,
            a,
            Some(g),
            Witness::ExpReducibility {
                x: tuple_values(&w.x),
                b: tuple_values(&w.b),
            },
            exp_reducibility_limit(&w.x, &v),
            None,
        )
    }

    pub fn exp_product(logs: &ExpProduct, target: &MatrixOverA, tol: f64) -> Result<Self> {
        let owner = target.owner();
        let f = Tuple::zeros(owner, 0);
        let mut cert = Certificate {
            schema: CERTIFICATE_SCHEMA.to_string(),
            claim: Claim::ExpProduct,
            instance: InstanceDescriptor::of(owner),
            inputs: Inputs {
                f: tuple_values(&f),
                g: None,
            },
            witness: Witness::ExpProduct {
                logs: logs_values(logs),
                target: MatrixValues::of(target),
            },
            tolerance: tol,
            residuals: BTreeMap::new(),
            obstruction: None,
            digest: String::new(),
        };
        let checks = evaluate(&cert, owner)?;
        if let Some((name, c)) = checks.iter().find(|(_, c)| !c.pass) {
            return Err(Error::InvalidWitness(format!(
                "{name} = {:e} against {:e}",
                c.value, c.limit
            )));
        }
        cert.residuals = checks.into_iter().map(|(k, c)| (k, c.value)).collect();
        cert.seal()?;
        Ok(cert)
    }

    pub fn hole_condition(g: &Element, eps: f64, result: &HoleConditionResult) -> Result<Self> {
        Self::assemble(
            Claim::HoleCondition,
            &Tuple::zeros(g.owner(), 0),
            Some(g),
            Witness::HoleCondition {
                eps,
                result: result.clone(),
            },
            0.0,
            None,
        )
    }

    /// SHA-256 of the canonical JSON with an empty digest field.
    pub fn compute_digest(&self) -> Result<String> {
        let mut unsealed = self.clone();
        unsealed.digest.clear();
        let bytes = serde_json::to_vec(&unsealed)?;
        let hash = Sha256::digest(&bytes);
        Ok(hash.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn seal(&mut self) -> Result<()> {
        self.digest = self.compute_digest()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Checks the digest and re-evaluates the claim from the serialized data.
pub fn certify(cert: &Certificate) -> Result<CertifyReport> {
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(Error::InvalidDescriptor(format!(
            "unknown certificate schema {}",
            cert.schema
        )));
    }
    let digest_ok = cert.compute_digest()? == cert.digest;
    let owner = cert.instance.build()?;
    let checks = evaluate(cert, &owner)?;
    let ok = digest_ok && checks.values().all(|c| c.pass);
    Ok(CertifyReport {
        claim: cert.claim,
        digest_ok,
        checks,
        ok,
    })
}

fn evaluate(cert: &Certificate, owner: &Instance) -> Result<BTreeMap<String, Check>> {
    let f = if cert.inputs.f.is_empty() {
        Tuple::zeros(owner, 0)
    } else {
        tuple_from_values(owner, &cert.inputs.f)?
    };
    let g = cert
        .inputs
        .g
        .as_ref()
        .map(|v| v.to_element(owner))
        .transpose()?;
    let need_g = || {
        g.clone()
            .ok_or_else(|| Error::InvalidWitness("missing g".into()))
    };
    let tol = cert.tolerance;
    let mut checks = BTreeMap::new();
    match (&cert.claim, &cert.witness) {
        (Claim::Reducible, Witness::Reduction { a, .. }) => {
            let g = need_g()?;
            let a = tuple_from_values(owner, a)?;
            let (min, _) = f.add_scaled(&g, &a)?.min_modulus();
            checks.insert("min_modulus".into(), lower(min, tol.max(0.0)));
        }
        (Claim::Principal, Witness::Principal { a, logs }) => {
            let g = need_g()?;
            let w = PrincipalWitness {
                a: tuple_from_values(owner, a)?,
                logs: logs_from(owner, logs)?,
                h: None,
            };
            let tol = capped(tol, principal_limit(&f.add_scaled(&g, &w.a)?));
            checks.insert(
                "principal".into(),
                upper(verify_principal(&f, &g, &w)?, tol),
            );
        }
        (Claim::RowExtension, Witness::RowExtension { x, logs }) => {
            let g = need_g()?;
            let x = tuple_from_values(owner, x)?;
            let (min, _) = f.add_scaled(&g, &x)?.min_modulus();
            checks.insert("reduction_min".into(), lower(min, 0.0));
            let tol = capped(tol, 1e-8 * scale_of(&f, Some(&g)));
            let u = f.push(g)?;
            let w = logs_from(owner, logs)?
                .evaluate()
                .ok_or_else(|| Error::InvalidWitness("empty product".into()))?;
            let e1 = Tuple::unit(owner, u.len(), 0);
            checks.insert("row".into(), upper(w.row_times(&u)?.distance(&e1)?, tol));
            checks.insert("det".into(), upper(det_residual(&w), tol));
            let inv = w.inverse(0.0)?;
            checks.insert("inverse_row".into(), upper(inv.row(0).distance(&u)?, tol));
        }
        (Claim::ExpReducible, Witness::ExpReducibility { x, b }) => {
            let g = need_g()?;
            let wit = ExpReducibilityWitness {
                x: tuple_from_values(owner, x)?,
                b: tuple_from_values(owner, b)?,
            };
            let tol = capped(
                tol,
                exp_reducibility_limit(&wit.x, &f.add_scaled(&g, &wit.b)?),
            );
            checks.insert(
                "exp_reducibility".into(),
                upper(verify_exp_reducibility(&f, &g, &wit)?, tol),
            );
        }
        (Claim::ExpProduct, Witness::ExpProduct { logs, target }) => {
            let target = target.to_matrix(owner)?;
            let tol = capped(tol, exp_product_limit(&target));
            let prod = logs_from(owner, logs)?.evaluate_or_identity(owner, target.n());
            checks.insert("product".into(), upper(prod.distance(&target)?, tol));
        }
        (Claim::HoleCondition, Witness::HoleCondition { eps, result }) => {
            let g = need_g()?;
            let k = owner
                .domain()
                .ok_or_else(|| Error::scope("hole condition needs a grid instance"))?;
            let z = sublevel_zero_set(&g, *eps)?;
            let report = complement_components(&z);
            let fresh = hole_condition_with(&report, &z, k)?;
            checks.insert("decision".into(), flag(fresh == *result));
        }
        (Claim::Irreducible | Claim::NotPrincipal, Witness::ZeroSet { eps }) => {
            let g = need_g()?;
            match &cert.obstruction {
                Some(ObstructionReport::Winding { windings }) => {
                    let strict = cert.claim == Claim::Irreducible;
                    let pass =
                        !windings.is_empty() && windings_confirmed(&f, &g, *eps, windings, strict)?;
                    checks.insert("windings".into(), flag(pass));
                }
                Some(ObstructionReport::NonPositive { point, value }) => {
                    let pass = cert.claim == Claim::NotPrincipal
                        && owner.field() == Field::Real
                        && f.len() == 1
                        && *point < owner.len()
                        && g.get(*point).norm() <= *eps
                        && f.get(0).get(*point).re <= 0.0
                        && f.get(0).get(*point).re == *value;
                    checks.insert("non_positive".into(), flag(pass));
                }
                None => {
                    checks.insert("obstruction".into(), flag(false));
                }
            }
        }
        _ => {
            return Err(Error::InvalidWitness(
                "witness payload does not match the claim".into(),
            ))
        }
    }
    Ok(checks)
}

/// Recomputes the windings behind an obstruction. With `strict`, every
/// claimed hole must also lie inside the domain.
fn windings_confirmed(
    f: &Tuple,
    g: &Element,
    eps: f64,
    claimed: &[HoleWinding],
    strict: bool,
) -> Result<bool> {
    if f.len() != 1 {
        return Ok(false);
    }
    let inst = g.owner();
    match inst.spectrum() {
        Spectrum::Circle { .. } => {
            if strict || claimed.len() != 1 || g.values().iter().any(|v| v.norm() > eps) {
                return Ok(false);
            }
            Ok(winding_number(f.get(0).values())? == claimed[0].winding && claimed[0].winding != 0)
        }
        Spectrum::Grid(k) => {
            let z = sublevel_zero_set(g, eps)?;
            let zinst = inst.restrict(&z)?;
            let fz = f.get(0).restrict(&zinst)?;
            let report = complement_components(&z);
            let hc = hole_condition_with(&report, &z, k)?;
            for w in claimed {
                if w.winding == 0 || w.hole >= report.holes.len() {
                    return Ok(false);
                }
                if strict && hc.verdicts[w.hole].holds() {
                    return Ok(false);
                }
                let fresh = if z.dim() == 1 {
                    gap_sign_change(&fz, &report.holes[w.hole].cells)?
                } else {
                    hole_windings(&fz, &report)?[w.hole].winding
                };
                if fresh != w.winding {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Spectrum::Finite { .. } => Ok(false),
    }
}

/// On an interval, half the sign change of `f` across a gap of the zero set.
fn gap_sign_change(fz: &Element, gap: &[usize]) -> Result<i64> {
    let zinst = fz.owner();
    let lo = gap.iter().min().copied().unwrap_or(0);
    let hi = gap.iter().max().copied().unwrap_or(0);
    let side = |c: Option<usize>| {
        c.and_then(|c| zinst.point_of_cell(c))
            .map(|p| fz.get(p).re.signum())
            .ok_or(Error::NotSubset)
    };
    let a = side(lo.checked_sub(1))?;
    let b = side(Some(hi + 1))?;
    Ok(((b - a) / 2.0) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraInstance, Scalar};
    use crate::raster::{Bbox, RasterDomain};
    use crate::reduce::{reduce_to_principal, reduce_tuple, PrincipalOutcome, ReduceOptions};

    fn planar(pred: impl Fn(f64, f64) -> bool) -> Instance {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), 1.0 / 16.0, 2, pred).unwrap();
        AlgebraInstance::grid(Field::Complex, d).unwrap()
    }

    fn radial(inst: &Instance, r: f64) -> Element {
        Element::coordinate(inst).map(|z| Scalar::new(z.norm() - r, 0.0))
    }

    fn round_trip(cert: &Certificate) -> Certificate {
        Certificate::from_json(&cert.to_json().unwrap()).unwrap()
    }

    #[test]
    fn reduction_certificate_round_trips() {
        let inst = planar(|x, y| (1.0..=2.0).contains(&x.hypot(y)));
        let g = radial(&inst, 1.5);
        let f = Tuple::new(vec![Element::coordinate(&inst)]).unwrap();
        let w = reduce_tuple(&f, &g, &ReduceOptions::default()).unwrap();
        let cert = Certificate::reduction(&f, &g, w.witness().unwrap(), 1e-8).unwrap();
        let back = round_trip(&cert);
        assert_eq!(back, cert);
        assert!(certify(&back).unwrap().ok);

        let mut tampered = back.clone();
        if let Witness::Reduction { a, .. } = &mut tampered.witness {
            a[0] = Values::Complex(vec![[0.0, 0.0]; a[0].len()]);
        }
        let rep = certify(&tampered).unwrap();
        assert!(!rep.digest_ok && !rep.ok);
    }

    #[test]
    fn obstruction_certificates_recheck() {
        let inst = planar(|x, y| x.hypot(y) <= 2.0);
        let g = radial(&inst, 1.0);
        let f = Tuple::new(vec![Element::coordinate(&inst)]).unwrap();
        let rep = match reduce_tuple(&f, &g, &ReduceOptions::default()).unwrap() {
            crate::reduce::ReduceOutcome::Irreducible(r) => r,
            _ => panic!("expected an obstruction"),
        };
        let cert = Certificate::irreducible(&f, &g, &rep).unwrap();
        assert!(certify(&round_trip(&cert)).unwrap().ok);

        let mut forged = cert.clone();
        if let Some(ObstructionReport::Winding { windings }) = &mut forged.obstruction {
            windings[0].winding = 2;
        }
        forged.seal().unwrap();
        let rep = certify(&forged).unwrap();
        assert!(rep.digest_ok && !rep.ok);
    }

    #[test]
    fn principal_certificate_on_annulus() {
        let inst = planar(|x, y| (1.0..=2.0).contains(&x.hypot(y)));
        let g = radial(&inst, 1.5);
        let f = Tuple::new(vec![
            Element::coordinate(&inst).map(|z| Scalar::new(2.0 + z.re, 0.0))
        ])
        .unwrap();
        let out = reduce_to_principal(&f, &g, &ReduceOptions::default()).unwrap();
        let PrincipalOutcome::Principal(w) = out else {
            panic!("expected a witness")
        };
        let cert = Certificate::principal(&f, &g, &w).unwrap();
        assert!(certify(&round_trip(&cert)).unwrap().ok);

        // A resealed certificate cannot buy slack by raising its tolerance.
        let mut loose = cert.clone();
        if let Witness::Principal { a, .. } = &mut loose.witness {
            a[0] = Values::Real(vec![0.0; a[0].len()]);
        }
        loose.tolerance = 1e6;
        loose.seal().unwrap();
        let rep = certify(&loose).unwrap();
        assert!(rep.digest_ok && !rep.ok);
    }

    #[test]
    fn hole_condition_certificate() {
        let inst = planar(|x, y| x.hypot(y) <= 2.0);
        let g = radial(&inst, 1.0);
        let z = sublevel_zero_set(&g, 0.2).unwrap();
        let res = crate::topology::hole_condition(&z, inst.domain().unwrap()).unwrap();
        assert!(!res.holds);
        let cert = Certificate::hole_condition(&g, 0.2, &res).unwrap();
        assert!(certify(&round_trip(&cert)).unwrap().ok);
        let mut flipped = cert.clone();
        if let Witness::HoleCondition { result, .. } = &mut flipped.witness {
            result.holds = true;
        }
        flipped.seal().unwrap();
        assert!(!certify(&flipped).unwrap().ok);
    }

    #[test]
    fn certificates_are_deterministic() {
        let inst = AlgebraInstance::finite(Field::Complex, 3).unwrap();
        let l = MatrixOverA::from_fn(&inst, 2, |i, j| {
            Element::scalar(&inst, Scalar::new(0.1 * (i + 2 * j) as f64, -0.2))
        })
        .unwrap();
        let logs = ExpProduct::new(vec![l.clone()]);
        let a = Certificate::exp_product(&logs, &l.exp(), 1e-9).unwrap();
        let b = Certificate::exp_product(&logs, &l.exp(), 1e-9).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(certify(&a).unwrap().ok);
    }
}
