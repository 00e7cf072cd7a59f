//! JSON encoding of the toolkit's data types.
//!
//! Scalar forms: `{"num": N, "den": D}` (exact rational, `den` optional),
//! `{"re": s, "im": s}` (complex built from two scalars), a bare integer,
//! or a bare float (floating mode only). Big integers round-trip through
//! arbitrary-precision JSON numbers.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::mpoly::{IdealCertificate, MultiPoly, UnitStatus};
use crate::opcore::{Backend, OperatorHandle};
use crate::polyalg::{CertificateMode, DensePoly, FactoredPoly, UnityCertificate};
use crate::posets::{AlphaSystem, IndexSet, SubsetMask};
use crate::scalar::{Field, GaussianRational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Number, Value};
use std::str::FromStr;

fn bigint_to_number(b: &BigInt) -> Value {
    if let Some(v) = b.to_i64() {
        return json!(v);
    }
    // arbitrary-precision number: parse the digit string back as JSON
    let n: Number = serde_json::from_str(&b.to_string()).expect("integer digits");
    Value::Number(n)
}

fn value_to_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            if s.contains('.') || s.contains('e') || s.contains('E') {
                return Err(Error::input(format!("expected an integer, got {}", s)));
            }
            BigInt::from_str(&s).map_err(|e| Error::input(format!("bad integer: {}", e)))
        }
        _ => Err(Error::input(format!("expected an integer, got {}", v))),
    }
}

pub fn rat_to_value(r: &BigRational) -> Value {
    if r.denom().is_one() {
        bigint_to_number(r.numer())
    } else {
        json!({"num": bigint_to_number(r.numer()), "den": bigint_to_number(r.denom())})
    }
}

pub fn value_to_rat(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(_) => Ok(BigRational::from(value_to_bigint(v)?)),
        Value::Object(map) => {
            let num = map
                .get("num")
                .ok_or_else(|| Error::input("rational object needs a \"num\" field"))?;
            let den = match map.get("den") {
                Some(d) => value_to_bigint(d)?,
                None => BigInt::one(),
            };
            for key in map.keys() {
                if key != "num" && key != "den" {
                    return Err(Error::input(format!("unknown field \"{}\" in rational", key)));
                }
            }
            if den.is_zero() {
                return Err(Error::input("rational denominator must be nonzero"));
            }
            Ok(BigRational::new(value_to_bigint(num)?, den))
        }
        _ => Err(Error::input(format!("cannot read {} as a rational", v))),
    }
}

/// Field elements that know how to read/write themselves as JSON.
pub trait JsonScalar: Field {
    fn from_value(v: &Value) -> Result<Self>;
    fn to_value(&self) -> Value;
    /// Mode tag embedded in emitted certificates.
    const MODE_TAG: &'static str;
}

impl JsonScalar for BigRational {
    const MODE_TAG: &'static str = "exact";

    fn from_value(v: &Value) -> Result<Self> {
        value_to_rat(v)
    }
    fn to_value(&self) -> Value {
        rat_to_value(self)
    }
}

impl JsonScalar for GaussianRational {
    const MODE_TAG: &'static str = "exact";

    fn from_value(v: &Value) -> Result<Self> {
        if let Value::Object(map) = v {
            if map.contains_key("re") || map.contains_key("im") {
                let re = map.get("re").map(value_to_rat).transpose()?.unwrap_or_else(
                    || BigRational::from(BigInt::from(0)),
                );
                let im = map.get("im").map(value_to_rat).transpose()?.unwrap_or_else(
                    || BigRational::from(BigInt::from(0)),
                );
                for key in map.keys() {
                    if key != "re" && key != "im" {
                        return Err(Error::input(format!(
                            "unknown field \"{}\" in complex scalar",
                            key
                        )));
                    }
                }
                return Ok(GaussianRational::new(re, im));
            }
        }
        Ok(GaussianRational::from_real(value_to_rat(v)?))
    }

    fn to_value(&self) -> Value {
        if self.is_real() {
            rat_to_value(&self.re)
        } else {
            json!({"re": rat_to_value(&self.re), "im": rat_to_value(&self.im)})
        }
    }
}

impl JsonScalar for Complex64 {
    const MODE_TAG: &'static str = "float";

    fn from_value(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => {
                let f = n
                    .as_f64()
                    .ok_or_else(|| Error::input("number out of float range"))?;
                Ok(Complex64::new(f, 0.0))
            }
            Value::Object(map) if map.contains_key("re") || map.contains_key("im") => {
                let part = |key: &str| -> Result<f64> {
                    match map.get(key) {
                        None => Ok(0.0),
                        Some(x) => Ok(Complex64::from_value(x)?.re),
                    }
                };
                Ok(Complex64::new(part("re")?, part("im")?))
            }
            Value::Object(_) => {
                // accept exact rationals in float mode, approximately
                let r = value_to_rat(v)?;
                Ok(Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0))
            }
            _ => Err(Error::input(format!("cannot read {} as a float scalar", v))),
        }
    }

    fn to_value(&self) -> Value {
        if self.im == 0.0 {
            json!(self.re)
        } else {
            json!({"re": self.re, "im": self.im})
        }
    }
}

pub fn parse_vector<F: JsonScalar>(v: &Value) -> Result<Vec<F>> {
    v.as_array()
        .ok_or_else(|| Error::input("expected an array of scalars"))?
        .iter()
        .map(F::from_value)
        .collect()
}

pub fn vector_to_value<F: JsonScalar>(v: &[F]) -> Value {
    Value::Array(v.iter().map(F::to_value).collect())
}

/// `{"leading": sc, "factors": [{"lambda": sc, "p": int}]}`
pub fn parse_factored_poly<F: JsonScalar>(v: &Value, eps: f64) -> Result<FactoredPoly<F>> {
    let map = expect_object(v, "factored polynomial")?;
    reject_unknown(map, &["leading", "factors"])?;
    let leading = match map.get("leading") {
        Some(l) => F::from_value(l)?,
        None => F::one(),
    };
    let factors_v = map
        .get("factors")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("factored polynomial needs a \"factors\" array"))?;
    let mut factors = Vec::with_capacity(factors_v.len());
    for fv in factors_v {
        let fmap = expect_object(fv, "factor")?;
        reject_unknown(fmap, &["lambda", "p"])?;
        let lambda = fmap
            .get("lambda")
            .ok_or_else(|| Error::input("factor needs \"lambda\""))
            .and_then(F::from_value)?;
        let p = fmap
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::input("factor needs a positive integer \"p\""))?;
        factors.push((lambda, p as usize));
    }
    FactoredPoly::new(leading, factors, eps)
}

pub fn factored_poly_to_value<F: JsonScalar>(p: &FactoredPoly<F>) -> Value {
    json!({
        "leading": p.leading.to_value(),
        "factors": p.factors.iter().map(|(l, m)| json!({"lambda": l.to_value(), "p": m}))
            .collect::<Vec<_>>(),
    })
}

pub fn dense_poly_to_value<F: JsonScalar>(p: &DensePoly<F>) -> Value {
    vector_to_value(p.coeffs())
}

pub fn parse_dense_poly<F: JsonScalar>(v: &Value) -> Result<DensePoly<F>> {
    Ok(DensePoly::from_coeffs(parse_vector(v)?))
}

pub fn parse_matrix<F: JsonScalar>(v: &Value) -> Result<Mat<F>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::input("expected a row-major matrix (array of arrays)"))?;
    let parsed: Vec<Vec<F>> = rows.iter().map(parse_vector).collect::<Result<_>>()?;
    Mat::from_rows(parsed)
}

pub fn matrix_to_value<F: JsonScalar>(m: &Mat<F>) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|r| vector_to_value(m.row(r)))
            .collect(),
    )
}

/// `{"dense": [[...]]}` or `{"diagonal": [[eig, mult], ...]}`
pub fn parse_operator<F: JsonScalar>(v: &Value) -> Result<OperatorHandle<F>> {
    let map = expect_object(v, "operator")?;
    reject_unknown(map, &["dense", "diagonal"])?;
    if let Some(d) = map.get("dense") {
        return OperatorHandle::dense(parse_matrix(d)?);
    }
    if let Some(d) = map.get("diagonal") {
        let entries = d
            .as_array()
            .ok_or_else(|| Error::input("diagonal operator needs an array of [eig, mult]"))?
            .iter()
            .map(|pair| {
                let arr = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::input("diagonal entry must be [eig, mult]"))?;
                let eig = F::from_value(&arr[0])?;
                let mult = arr[1]
                    .as_u64()
                    .ok_or_else(|| Error::input("diagonal multiplicity must be an integer"))?;
                Ok((eig, mult as usize))
            })
            .collect::<Result<Vec<_>>>()?;
        return OperatorHandle::diagonal(entries);
    }
    Err(Error::input("operator needs a \"dense\" or \"diagonal\" field"))
}

pub fn operator_to_value<F: JsonScalar>(op: &OperatorHandle<F>) -> Value {
    match &op.backend {
        Backend::Dense(m) => json!({"dense": matrix_to_value(m)}),
        Backend::Diagonal(entries) => json!({
            "diagonal": entries.iter().map(|(e, m)| json!([e.to_value(), m])).collect::<Vec<_>>()
        }),
        Backend::Apply(_) => json!({"apply": "opaque"}),
    }
}

/// `{"nvars": k, "terms": [{"exp": [...], "num": N, "den": D}]}`
pub fn parse_multipoly(v: &Value) -> Result<MultiPoly> {
    let map = expect_object(v, "multivariate polynomial")?;
    reject_unknown(map, &["nvars", "terms"])?;
    let nvars = map
        .get("nvars")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::input("multipoly needs a positive \"nvars\""))? as usize;
    let mut terms = Vec::new();
    for tv in map
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("multipoly needs a \"terms\" array"))?
    {
        let tmap = expect_object(tv, "term")?;
        reject_unknown(tmap, &["exp", "num", "den"])?;
        let exp: Vec<u32> = tmap
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("term needs an \"exp\" array"))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .map(|x| x as u32)
                    .ok_or_else(|| Error::input("exponents must be nonnegative integers"))
            })
            .collect::<Result<_>>()?;
        let num = tmap
            .get("num")
            .ok_or_else(|| Error::input("term needs a \"num\""))?;
        let den = tmap.get("den").cloned().unwrap_or_else(|| json!(1));
        let coeff = BigRational::new(value_to_bigint(num)?, value_to_bigint(&den)?);
        terms.push((exp, coeff));
    }
    MultiPoly::from_terms(nvars, terms)
}

pub fn multipoly_to_value(p: &MultiPoly) -> Value {
    json!({
        "nvars": p.nvars,
        "terms": p.terms().map(|(m, c)| json!({
            "exp": m.0.clone(),
            "num": bigint_to_number(c.numer()),
            "den": bigint_to_number(c.denom()),
        })).collect::<Vec<_>>(),
    })
}

/// `{"ell": int, "members": [[int, ...], ...]}`
pub fn parse_alpha_system(v: &Value) -> Result<AlphaSystem> {
    let map = expect_object(v, "alpha system")?;
    reject_unknown(map, &["ell", "members"])?;
    let ell = map
        .get("ell")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::input("alpha system needs \"ell\""))? as usize;
    let ground = IndexSet::new(ell)?;
    let members = map
        .get("members")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("alpha system needs a \"members\" array"))?
        .iter()
        .map(|mv| {
            let indices: Vec<usize> = mv
                .as_array()
                .ok_or_else(|| Error::input("member must be an index array"))?
                .iter()
                .map(|i| {
                    i.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::input("indices must be nonnegative integers"))
                })
                .collect::<Result<_>>()?;
            Ok(SubsetMask::from_indices(&indices))
        })
        .collect::<Result<Vec<_>>>()?;
    AlphaSystem::new(ground, members)
}

pub fn alpha_system_to_value(a: &AlphaSystem) -> Value {
    json!({
        "ell": a.ground.ell,
        "members": a.members.iter().map(|m| m.indices()).collect::<Vec<_>>(),
    })
}

/// Emit a unity certificate with a kind tag so it can be re-verified.
pub fn unity_certificate_to_value<F: JsonScalar>(cert: &UnityCertificate<F>) -> Value {
    json!({
        "kind": "unity-certificate",
        "scalar_mode": F::MODE_TAG,
        "certificate_mode": match cert.mode {
            CertificateMode::Full => "full",
            CertificateMode::GroupedReal => "grouped-real",
        },
        "poly": factored_poly_to_value(&cert.source),
        "groups": cert.groups,
        "cofactors": cert.cofactors.iter().map(dense_poly_to_value).collect::<Vec<_>>(),
        "complements": cert.complements.iter().map(dense_poly_to_value).collect::<Vec<_>>(),
    })
}

pub fn parse_unity_certificate<F: JsonScalar>(v: &Value, eps: f64) -> Result<UnityCertificate<F>> {
    let map = expect_object(v, "unity certificate")?;
    let mode = match map.get("certificate_mode").and_then(Value::as_str) {
        Some("grouped-real") => CertificateMode::GroupedReal,
        _ => CertificateMode::Full,
    };
    let source = parse_factored_poly(
        map.get("poly")
            .ok_or_else(|| Error::input("certificate needs \"poly\""))?,
        eps,
    )?;
    let groups: Vec<Vec<usize>> = map
        .get("groups")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("certificate needs \"groups\""))?
        .iter()
        .map(|g| {
            g.as_array()
                .ok_or_else(|| Error::input("group must be an index array"))?
                .iter()
                .map(|i| {
                    i.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::input("group indices must be integers"))
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<_>>()?;
    let parse_polys = |key: &str| -> Result<Vec<DensePoly<F>>> {
        map.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input(format!("certificate needs \"{}\"", key)))?
            .iter()
            .map(parse_dense_poly)
            .collect()
    };
    Ok(UnityCertificate {
        source,
        mode,
        groups,
        cofactors: parse_polys("cofactors")?,
        complements: parse_polys("complements")?,
    })
}

pub fn ideal_certificate_to_value(cert: &IdealCertificate) -> Value {
    json!({
        "kind": "ideal-certificate",
        "status": match cert.status { UnitStatus::Unit => "unit", UnitStatus::NotUnit => "not-unit" },
        "generators": cert.generators.iter().map(multipoly_to_value).collect::<Vec<_>>(),
        "cofactors": cert.cofactors.iter().map(multipoly_to_value).collect::<Vec<_>>(),
    })
}

pub fn parse_ideal_certificate(v: &Value) -> Result<IdealCertificate> {
    let map = expect_object(v, "ideal certificate")?;
    let status = match map.get("status").and_then(Value::as_str) {
        Some("unit") => UnitStatus::Unit,
        Some("not-unit") => UnitStatus::NotUnit,
        _ => return Err(Error::input("certificate needs a \"status\" of unit|not-unit")),
    };
    let parse_list = |key: &str| -> Result<Vec<MultiPoly>> {
        map.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input(format!("certificate needs \"{}\"", key)))?
            .iter()
            .map(parse_multipoly)
            .collect()
    };
    Ok(IdealCertificate {
        generators: parse_list("generators")?,
        cofactors: parse_list("cofactors")?,
        status,
    })
}

/// Block report keyed by `"i,j"` with dense block entries.
pub fn symmetry_blocks_to_value<F: JsonScalar>(
    blocks: &crate::symmetry::SymmetryBlocks<F>,
) -> Value {
    let mut map = Map::new();
    for (i, row) in blocks.blocks.iter().enumerate() {
        for (j, block) in row.iter().enumerate() {
            map.insert(format!("{},{}", i, j), matrix_to_value(block));
        }
    }
    json!({
        "kind": "symmetry-blocks",
        "null_dims": blocks.null_dims(),
        "blocks": Value::Object(map),
    })
}

pub fn expect_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::input(format!("expected a JSON object for {}", what)))
}

/// Schema guard: every input object rejects fields it does not know.
pub fn reject_unknown(map: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::input(format!(
                "unknown field \"{}\" (allowed: {})",
                key,
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}
