//! End-to-end construction for one valency, serialized as a certificate that
//! can be re-checked from its stored values alone.
//!
//! The JSON form has sorted keys, integers written as decimal strings and
//! field elements as `{a0, a1}` meaning `a0 + a1·t`.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::dec;
use crate::error::{ensure, Error, Result};
use crate::factor::{is_prime_u64, is_probable_prime};
use crate::field::{legendre, FieldCtx, FieldElem};
use crate::flagmap::{MapInvariants, RegularMap, Trinity};
use crate::intpoly::real_cyclotomic;
use crate::norm::{norm_g, select_prime, NormReport, PrimeCheck};
use crate::psl2::{build_generators, enumerate_group, psl2_order, Mat2, MapSeed, MatrixRing, ProjElem};

pub const SCHEMA_VERSION: &str = "1";

/// Default cap on the group order enumerated for flag-level checks.
pub const DEFAULT_GROUP_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertElem {
    #[serde(with = "dec")]
    pub a0: u64,
    #[serde(with = "dec")]
    pub a1: u64,
}

impl From<FieldElem> for CertElem {
    fn from(e: FieldElem) -> Self {
        CertElem { a0: e.a0, a1: e.a1 }
    }
}

impl From<CertElem> for FieldElem {
    fn from(e: CertElem) -> Self {
        FieldElem { a0: e.a0, a1: e.a1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertMatrix {
    pub a: CertElem,
    pub b: CertElem,
    pub c: CertElem,
    pub d: CertElem,
}

impl From<&Mat2> for CertMatrix {
    fn from(m: &Mat2) -> Self {
        CertMatrix { a: m.a.into(), b: m.b.into(), c: m.c.into(), d: m.d.into() }
    }
}

impl From<&ProjElem> for CertMatrix {
    fn from(m: &ProjElem) -> Self {
        m.matrix().into()
    }
}

impl CertMatrix {
    pub fn to_mat(&self) -> Mat2 {
        Mat2 { a: self.a.into(), b: self.b.into(), c: self.c.into(), d: self.d.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertField {
    #[serde(with = "dec")]
    pub p: u64,
    #[serde(with = "dec")]
    pub degree: u8,
    #[serde(with = "dec::opt")]
    pub nonresidue: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertInvariants {
    #[serde(with = "dec")]
    pub flags: u64,
    #[serde(with = "dec")]
    pub vertices: u64,
    #[serde(with = "dec")]
    pub edges: u64,
    #[serde(with = "dec")]
    pub faces: u64,
    #[serde(with = "dec")]
    pub euler_char: i64,
    #[serde(with = "dec")]
    pub type_k: u64,
    #[serde(with = "dec")]
    pub type_l: u64,
    #[serde(with = "dec")]
    pub petrie_len: u64,
    pub orientable: bool,
}

impl From<MapInvariants> for CertInvariants {
    fn from(m: MapInvariants) -> Self {
        CertInvariants {
            flags: m.flags,
            vertices: m.vertices,
            edges: m.edges,
            faces: m.faces,
            euler_char: m.euler_char,
            type_k: m.type_k,
            type_l: m.type_l,
            petrie_len: m.petrie_len,
            orientable: m.orientable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertFactor {
    #[serde(with = "dec")]
    pub prime: BigUint,
    #[serde(with = "dec")]
    pub exponent: u32,
    pub probable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertNorm {
    #[serde(with = "dec")]
    pub norm: BigInt,
    /// Coefficients of the real cyclotomic polynomial, constant term first.
    pub psi: Vec<String>,
    pub factorization: Vec<CertFactor>,
    pub admissible: Vec<String>,
}

/// Every canonical choice the construction made.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decisions {
    pub prime_choice: String,
    pub root_choice: String,
    pub nonresidue: String,
    pub projective_form: String,
    /// `(σ, τ)` with `ZR = σR⁻¹Z` and `ZS = τS⁻¹Z` on the det-1 matrices.
    pub reflection_signs: [String; 2],
    #[serde(with = "dec")]
    pub group_budget: u64,
    pub flag_checks: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: String,
    #[serde(with = "dec")]
    pub k: u64,
    #[serde(with = "dec")]
    pub p: u64,
    #[serde(with = "dec")]
    pub epsilon: i8,
    pub field: CertField,
    pub zeta: CertElem,
    pub xi: CertElem,
    #[serde(rename = "D")]
    pub d: CertElem,
    pub minus_d_is_square: bool,
    #[serde(rename = "R")]
    pub r: CertMatrix,
    #[serde(rename = "S")]
    pub s: CertMatrix,
    #[serde(rename = "Z")]
    pub z_reflection: CertMatrix,
    pub x: CertMatrix,
    pub y: CertMatrix,
    pub z: CertMatrix,
    #[serde(with = "dec")]
    pub group_order: BigUint,
    pub invariants: Option<CertInvariants>,
    pub flag_check: Option<Trinity>,
    pub duality_witness: Option<CertMatrix>,
    pub petrie_witness: Option<CertMatrix>,
    pub norm_report: CertNorm,
    pub decisions: Decisions,
}

impl Certificate {
    /// Canonical JSON text; key order is alphabetical at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificate serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: Certificate =
            serde_json::from_str(text).map_err(|e| Error::Malformed(format!("certificate: {e}")))?;
        ensure!(
            cert.schema_version == SCHEMA_VERSION,
            Malformed,
            "unsupported schema version {:?}",
            cert.schema_version
        );
        Ok(cert)
    }

    pub fn field_ctx(&self) -> Result<FieldCtx> {
        FieldCtx::from_parts(self.field.p, self.field.degree, self.field.nonresidue)
    }

    /// The flag map of `⟨x, y, z⟩`, based at the identity.
    pub fn regular_map(&self, budget: u64) -> Result<RegularMap> {
        let ring = MatrixRing::new(self.field_ctx()?);
        let triple = [self.x, self.y, self.z].map(|m| canonical(&ring, &m));
        let [Some(x), Some(y), Some(z)] = triple else {
            return Err(Error::Verification("x, y, z must be nonsingular canonical matrices".into()));
        };
        flag_map(&ring, [x, y, z], budget)
    }
}

/// Stored matrix as a projective element, if it is nonsingular and already in
/// canonical form.
fn canonical(ring: &MatrixRing, m: &CertMatrix) -> Option<ProjElem> {
    let mat = m.to_mat();
    ring.proj(&mat).filter(|p| *p.matrix() == mat)
}

fn flag_map(ring: &MatrixRing, triple: [ProjElem; 3], budget: u64) -> Result<RegularMap> {
    let table = enumerate_group(ring, &triple, budget as usize)?;
    RegularMap::from_group(&table.elements, triple, |a, b| ring.proj_mul(a, b))
}

fn cert_norm(rep: &NormReport) -> CertNorm {
    CertNorm {
        norm: rep.norm.clone(),
        psi: rep.psi.coeffs().iter().map(|c| c.to_string()).collect(),
        factorization: rep
            .factorization
            .iter()
            .map(|f| CertFactor { prime: f.prime.clone(), exponent: f.exponent, probable: f.probable })
            .collect(),
        admissible: rep.admissible.iter().map(|a| a.p.to_string()).collect(),
    }
}

/// Valencies the matrix construction applies to directly.
pub fn check_construct_valency(k: u64) -> Result<()> {
    ensure!(k != 3, InvalidInput, "there is no regular self-dual self-Petrie-dual map of valency 3");
    ensure!(k % 2 == 1 && k >= 5, InvalidInput, "valency must be odd and at least 5, got {k}");
    ensure!(
        k == 9 || is_prime_u64(k),
        InvalidInput,
        "valency {k} is composite; use `plan {k}` to get a base valency and lift factor"
    );
    Ok(())
}

/// Runs the whole pipeline for valency `k`.
pub fn construct(k: u64, prime_override: Option<u64>, budget: u64) -> Result<Certificate> {
    check_construct_valency(k)?;
    let report = NormReport::compute(k)?;
    let prime = select_prime(&report, prime_override)?;
    let p = prime
        .p_u64()
        .filter(|&p| p < 1 << 62)
        .ok_or_else(|| Error::Resource(format!("prime {} is too large for native arithmetic", prime.p)))?;
    let seed = MapSeed::build(k, p)?;
    let ring = seed.ring();
    let group_order = seed.expected_order();

    let duality = seed.duality_witness();
    let petrie = seed.petrie_witness();
    ensure!(duality.is_some(), Verification, "no matrix conjugating (x,y,z) to (y,x,z)");
    ensure!(petrie.is_some(), Verification, "no matrix conjugating (x,y,z) to (xy,y,z)");

    let (invariants, flag_check, flag_note) = if group_order <= BigUint::from(budget) {
        seed.enumerate(budget as usize)?;
        let map = flag_map(&ring, seed.triple(), budget)?;
        ensure!(BigUint::from(map.flag_count()) == group_order, Verification, "flag count ≠ |G|");
        let inv = map.invariants();
        let trinity = map.trinity_check()?;
        ensure!(
            (inv.type_k, inv.type_l, inv.petrie_len) == (k, k, k),
            Verification,
            "map has type ({}, {}) and Petrie length {}, expected {k} throughout",
            inv.type_k,
            inv.type_l,
            inv.petrie_len
        );
        ensure!(!inv.orientable, Verification, "map is orientable");
        ensure!(
            trinity.self_dual && trinity.self_petrie,
            Verification,
            "flag-level check failed: self-dual {}, self-Petrie-dual {}",
            trinity.self_dual,
            trinity.self_petrie
        );
        (Some(inv.into()), Some(trinity), "performed".to_string())
    } else {
        let note = format!("skipped: group order {group_order} exceeds budget {budget}; matrix witnesses only");
        (None, None, note)
    };

    let (sr, ss) = seed.reflection.signs;
    Ok(Certificate {
        schema_version: SCHEMA_VERSION.into(),
        k,
        p,
        epsilon: seed.epsilon,
        field: CertField { p, degree: seed.ctx.degree(), nonresidue: seed.ctx.nonresidue() },
        zeta: seed.zeta.into(),
        xi: seed.xi.into(),
        d: seed.d.into(),
        minus_d_is_square: seed.minus_d_is_square,
        r: (&seed.r_raw).into(),
        s: (&seed.s_raw).into(),
        z_reflection: (&seed.z).into(),
        x: (&seed.x).into(),
        y: (&seed.y).into(),
        z: (&seed.z).into(),
        group_order: group_order.clone(),
        invariants,
        flag_check,
        duality_witness: duality.as_ref().map(Into::into),
        petrie_witness: petrie.as_ref().map(Into::into),
        norm_report: cert_norm(&report),
        decisions: Decisions {
            prime_choice: match prime_override {
                Some(_) => "requested".into(),
                None => "smallest admissible prime factor".into(),
            },
            root_choice: "root of 3t^2+2t+3 with the smaller encoding a0 + a1*p".into(),
            nonresidue: match seed.ctx.nonresidue() {
                Some(nu) => format!("GF(p^2) = GF(p)[t]/(t^2 - {nu}), smallest nonresidue"),
                None => "none; prime field".into(),
            },
            projective_form: "scaled so the first nonzero entry in row-major order is 1".into(),
            reflection_signs: [sr.to_string(), ss.to_string()],
            group_budget: budget,
            flag_checks: flag_note,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub k: u64,
    pub p: u64,
    pub checks: Vec<CheckResult>,
    pub flag_level: String,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

struct Checker {
    checks: Vec<CheckResult>,
}

impl Checker {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        let detail = if passed { String::new() } else { detail.into() };
        self.checks.push(CheckResult { name: name.into(), passed, detail });
        passed
    }
}

/// Re-checks a certificate from its stored values. Only structural problems
/// that make the certificate unreadable are returned as errors; everything
/// else becomes a named check.
pub fn verify(cert: &Certificate, budget: u64) -> Result<VerifyReport> {
    let mut ch = Checker { checks: Vec::new() };
    let (k, p) = (cert.k, cert.p);
    let report = |ch: Checker, flag_level: &str| VerifyReport {
        k,
        p,
        checks: ch.checks,
        flag_level: flag_level.into(),
    };

    // Arithmetic of k and p.
    let k_ok = k % 2 == 1 && k >= 5 && (k == 9 || is_prime_u64(k));
    ch.check("valency is 9 or a prime >= 5", k_ok, format!("k = {k}"));
    ch.check("p is a prime >= 5", p >= 5 && is_prime_u64(p), format!("p = {p}"));
    let pc = PrimeCheck::new(&BigUint::from(p), k);
    ch.check("p ≡ ±1 (mod 2k)", pc.pm1_mod_2k, format!("p mod {} = {}", 2 * k, pc.residue_2k));
    ch.check("p ≡ ±1 (mod 12)", pc.pm1_mod_12, format!("p mod 12 = {}", pc.residue_12));
    let eps_expected = if pc.residue_2k == 1 { 1 } else { -1 };
    ch.check("epsilon matches p mod 2k", cert.epsilon == eps_expected, format!("stored {}", cert.epsilon));
    ch.check(
        "field degree matches epsilon",
        (cert.field.degree == 1) == (cert.epsilon == 1),
        format!("degree {} with epsilon {}", cert.field.degree, cert.epsilon),
    );
    ch.check("field characteristic is p", cert.field.p == p, format!("field p = {}", cert.field.p));
    if !k_ok {
        return Ok(report(ch, "not reached"));
    }

    // Norm evidence.
    let nr = &cert.norm_report;
    let norm = norm_g(k)?;
    ch.check("N(g) value", nr.norm == norm, format!("stored {}, recomputed {norm}", nr.norm));
    let psi: Vec<String> = real_cyclotomic(k)?.coeffs().iter().map(|c| c.to_string()).collect();
    ch.check("real cyclotomic coefficients", nr.psi == psi, "stored coefficients differ");
    let product = nr
        .factorization
        .iter()
        .fold(BigUint::from(1u32), |acc, f| acc * f.prime.pow(f.exponent));
    ch.check(
        "factorization multiplies to |N(g)|",
        product == *nr.norm.magnitude(),
        format!("product {product}"),
    );
    ch.check(
        "factors are prime",
        nr.factorization.iter().all(|f| is_probable_prime(&f.prime)),
        "a stored factor is composite",
    );
    ch.check(
        "p divides N(g)",
        nr.factorization.iter().any(|f| f.prime == BigUint::from(p)),
        format!("{p} is not among the stored factors"),
    );
    if is_prime_u64(k) {
        ch.check(
            "every factor of N(g) is ≡ ±1 (mod 2k and 12)",
            nr.factorization.iter().all(|f| PrimeCheck::new(&f.prime, k).passes()),
            "a factor fails the congruences",
        );
    }

    // Field and its elements.
    let ctx = match cert.field_ctx() {
        Ok(ctx) => ctx,
        Err(e) => {
            ch.check("field descriptor is valid", false, e.to_string());
            return Ok(report(ch, "not reached"));
        }
    };
    let f = &ctx;
    let mut elems: Vec<CertElem> = vec![cert.zeta, cert.xi, cert.d];
    let mut mats = vec![cert.r, cert.s, cert.z_reflection, cert.x, cert.y, cert.z];
    mats.extend(cert.duality_witness);
    mats.extend(cert.petrie_witness);
    for m in &mats {
        elems.extend([m.a, m.b, m.c, m.d]);
    }
    if !ch.check(
        "stored elements lie in the field",
        elems.iter().all(|e| f.contains((*e).into())),
        "an entry is out of range",
    ) {
        return Ok(report(ch, "not reached"));
    }

    let zeta: FieldElem = cert.zeta.into();
    let xi: FieldElem = cert.xi.into();
    let d: FieldElem = cert.d.into();
    let Some(zeta_inv) = f.inv(zeta) else {
        ch.check("zeta is nonzero", false, "");
        return Ok(report(ch, "not reached"));
    };
    let quad = f.add(f.add(f.mul(f.from_i64(3), f.square(zeta)), f.mul(f.from_i64(2), zeta)), f.from_i64(3));
    ch.check("3ζ² + 2ζ + 3 = 0", quad == f.zero(), format!("value {quad}"));
    let ord_zeta = f.element_order(zeta)?;
    ch.check("ζ has order k", ord_zeta == k as u128, format!("order {ord_zeta}"));
    ch.check(
        "ζ is the root with the smaller encoding",
        f.encode(zeta) <= f.encode(zeta_inv),
        format!("ζ⁻¹ = {zeta_inv} encodes lower"),
    );
    let xi_expected = f.neg(f.pow(zeta, ((k + 1) / 2) as u128));
    ch.check("ξ = −ζ^((k+1)/2)", xi == xi_expected, format!("expected {xi_expected}"));
    let d_expected = f.mul(f.from_i64(2), f.add(zeta, zeta_inv));
    ch.check("D = 2(ζ + ζ⁻¹)", d == d_expected, format!("expected {d_expected}"));
    let minus_d = f.neg(d);
    let four_thirds = f.mul(f.from_i64(4), f.inv(f.from_i64(3)).unwrap());
    ch.check("−D = 4/3", minus_d == four_thirds, format!("−D = {minus_d}"));
    let sq = minus_d.is_base() && legendre(minus_d.a0 as i64, p) == 1;
    ch.check("−D is a square mod p", sq && cert.minus_d_is_square, "non-orientability condition fails");

    // Generators.
    let ring = MatrixRing::new(ctx);
    let (r_raw, s_raw) = (cert.r.to_mat(), cert.s.to_mat());
    let gens_ok = match build_generators(k, zeta, xi, &ctx) {
        Ok(g) => g.r == r_raw && g.s == s_raw,
        Err(_) => false,
    };
    ch.check("R and S match the generator formulas", gens_ok, "stored R or S differs from the rebuilt matrices");
    ch.check("det R = 1", ring.det(&r_raw) == f.one(), "");
    ch.check("det S = 1", ring.det(&s_raw) == f.one(), "");
    let (Some(r), Some(s)) = (ring.proj(&r_raw), ring.proj(&s_raw)) else {
        ch.check("R and S are nonsingular", false, "");
        return Ok(report(ch, "not reached"));
    };
    let id = ring.proj_identity();
    ch.check("ord(R) = k", ring.proj_order(&r) == k, format!("ord {}", ring.proj_order(&r)));
    ch.check("ord(S) = k", ring.proj_order(&s) == k, format!("ord {}", ring.proj_order(&s)));
    let rs = ring.proj_mul(&r, &s);
    ch.check("ord(RS) = 2", rs != id && ring.proj_mul(&rs, &rs) == id, "");

    // Reflection and involution triple.
    let named = [
        ("Z", cert.z_reflection),
        ("x", cert.x),
        ("y", cert.y),
        ("z", cert.z),
    ];
    let mut proj = Vec::new();
    for (name, m) in named {
        match canonical(&ring, &m) {
            Some(e) => proj.push(e),
            None => {
                ch.check(&format!("{name} is a nonsingular canonical matrix"), false, "");
                return Ok(report(ch, "not reached"));
            }
        }
    }
    let [zr, x, y, z] = [proj[0], proj[1], proj[2], proj[3]];
    ch.check("Z² = 1", zr != id && ring.proj_mul(&zr, &zr) == id, "");
    ch.check("ZRZ⁻¹ = R⁻¹", ring.conj(&zr, &r) == ring.proj_inv(&r), "");
    ch.check("ZSZ⁻¹ = S⁻¹", ring.conj(&zr, &s) == ring.proj_inv(&s), "");
    ch.check("det Z is a square", ring.det_is_square(&zr), "");
    ch.check("x = ZS", x == ring.proj_mul(&zr, &s), "");
    ch.check("y = RZ", y == ring.proj_mul(&r, &zr), "");
    ch.check("z = Z", z == zr, "");
    for (name, g) in [("x", x), ("y", y), ("z", z)] {
        ch.check(&format!("{name} is an involution"), g != id && ring.proj_mul(&g, &g) == id, "");
    }
    let xy = ring.proj_mul(&x, &y);
    ch.check("(xy)² = 1", ring.proj_mul(&xy, &xy) == id, "");

    // Matrix witnesses.
    let witness = |m: &Option<CertMatrix>, target: [ProjElem; 3]| -> bool {
        m.as_ref()
            .and_then(|m| canonical(&ring, m))
            .is_some_and(|t| [x, y, z].iter().zip(&target).all(|(a, b)| ring.conj(&t, a) == *b))
    };
    let dual_ok = witness(&cert.duality_witness, [y, x, z]);
    let petrie_ok = witness(&cert.petrie_witness, [xy, y, z]);
    ch.check("duality witness conjugates (x,y,z) to (y,x,z)", dual_ok, "");
    ch.check("Petrie witness conjugates (x,y,z) to (xy,y,z)", petrie_ok, "");

    // Group order and flag level.
    let expected = if p >= 5 { psl2_order(p) } else { BigUint::from(0u32) };
    ch.check(
        "group order is p(p²−1)/2",
        cert.group_order == expected,
        format!("stored {}, expected {expected}", cert.group_order),
    );
    if cert.group_order > BigUint::from(budget) {
        return Ok(report(ch, &format!("skipped: group order {} exceeds budget {budget}", cert.group_order)));
    }
    let map = match flag_map(&ring, [x, y, z], budget) {
        Ok(m) => m,
        Err(e) => {
            ch.check("⟨x, y, z⟩ enumerates within the budget", false, e.to_string());
            return Ok(report(ch, "failed"));
        }
    };
    ch.check(
        "|⟨x, y, z⟩| equals the stored group order",
        BigUint::from(map.flag_count()) == cert.group_order,
        format!("enumerated {}", map.flag_count()),
    );
    let inv: CertInvariants = map.invariants().into();
    ch.check(
        "map invariants match",
        cert.invariants == Some(inv),
        format!("recomputed {inv:?}"),
    );
    ch.check(
        "type and Petrie length equal k",
        (inv.type_k, inv.type_l, inv.petrie_len) == (k, k, k),
        format!("type ({}, {}), Petrie {}", inv.type_k, inv.type_l, inv.petrie_len),
    );
    ch.check("map is non-orientable", !inv.orientable, "");
    let trinity = map.trinity_check()?;
    ch.check(
        "flag-level trinity holds and matches",
        trinity.self_dual && trinity.self_petrie && cert.flag_check == Some(trinity),
        format!("recomputed {trinity:?}, stored {:?}", cert.flag_check),
    );
    ch.check(
        "matrix witnesses agree with flag-level answers",
        dual_ok == trinity.self_dual && petrie_ok == trinity.self_petrie,
        "",
    );
    Ok(report(ch, "checked"))
}
