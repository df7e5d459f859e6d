//! 2×2 matrix groups over `GF(p)` / `GF(p²)` modulo scalars.
//!
//! The generators are
//!
//! ```text
//! R = [ξ 0; 0 ξ⁻¹]
//! S = (ξ − ξ⁻¹)⁻¹ · [−(ξ+ξ⁻¹)ξ⁻¹  −D; 1  (ξ+ξ⁻¹)ξ],   D = 2(ζ + ζ⁻¹)
//! ```
//!
//! for a primitive `2k`-th root of unity `ξ` with `ζ = ξ²`. `⟨R, S⟩` is a copy
//! of `PSL(2, p)` in which `R`, `S` have order `k` and `RS` is an involution.
//! A reflection `Z` inverting both `R` and `S` gives the involution triple
//! `x = ZS`, `y = RZ`, `z = Z` of the regular map.

use num_bigint::BigUint;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::field::{legendre, solve_zeta, xi_from_zeta, FieldCtx, FieldElem};

/// A 2×2 matrix `[a b; c d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

impl Mat2 {
    pub fn entries(&self) -> [FieldElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_entries(e: [FieldElem; 4]) -> Self {
        Mat2 { a: e[0], b: e[1], c: e[2], d: e[3] }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

/// A matrix up to nonzero scalars, stored with its first nonzero entry
/// (row-major) scaled to one. Equality is equality in `PGL(2, F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjElem(Mat2);

impl ProjElem {
    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }
}

impl fmt::Display for ProjElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Matrix arithmetic over a fixed field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixRing {
    pub field: FieldCtx,
}

impl MatrixRing {
    pub fn new(field: FieldCtx) -> Self {
        MatrixRing { field }
    }

    pub fn identity(&self) -> Mat2 {
        let f = &self.field;
        Mat2 { a: f.one(), b: f.zero(), c: f.zero(), d: f.one() }
    }

    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let f = &self.field;
        Mat2 {
            a: f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)),
            b: f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
            c: f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)),
            d: f.add(f.mul(x.c, y.b), f.mul(x.d, y.d)),
        }
    }

    pub fn det(&self, m: &Mat2) -> FieldElem {
        let f = &self.field;
        f.sub(f.mul(m.a, m.d), f.mul(m.b, m.c))
    }

    pub fn trace(&self, m: &Mat2) -> FieldElem {
        self.field.add(m.a, m.d)
    }

    pub fn scale(&self, m: &Mat2, s: FieldElem) -> Mat2 {
        let f = &self.field;
        Mat2::from_entries(m.entries().map(|e| f.mul(e, s)))
    }

    pub fn inv(&self, m: &Mat2) -> Option<Mat2> {
        let f = &self.field;
        let di = f.inv(self.det(m))?;
        Some(self.scale(&Mat2 { a: m.d, b: f.neg(m.b), c: f.neg(m.c), d: m.a }, di))
    }

    pub fn is_scalar(&self, m: &Mat2) -> bool {
        let z = self.field.zero();
        m.b == z && m.c == z && m.a == m.d && m.a != z
    }

    /// Canonical projective form; `None` for singular matrices.
    pub fn proj(&self, m: &Mat2) -> Option<ProjElem> {
        if self.det(m) == self.field.zero() {
            return None;
        }
        let lead = m.entries().into_iter().find(|&e| e != self.field.zero())?;
        Some(ProjElem(self.scale(m, self.field.inv(lead)?)))
    }

    fn proj_unchecked(&self, m: &Mat2) -> ProjElem {
        self.proj(m).expect("product of invertible matrices is invertible")
    }

    pub fn proj_identity(&self) -> ProjElem {
        ProjElem(self.identity())
    }

    pub fn proj_mul(&self, x: &ProjElem, y: &ProjElem) -> ProjElem {
        self.proj_unchecked(&self.mul(&x.0, &y.0))
    }

    pub fn proj_inv(&self, x: &ProjElem) -> ProjElem {
        self.proj_unchecked(&self.inv(&x.0).expect("projective elements are invertible"))
    }

    /// `x·y·x⁻¹`.
    pub fn conj(&self, x: &ProjElem, y: &ProjElem) -> ProjElem {
        self.proj_mul(&self.proj_mul(x, y), &self.proj_inv(x))
    }

    pub fn proj_pow(&self, x: &ProjElem, mut e: u64) -> ProjElem {
        let mut base = *x;
        let mut acc = self.proj_identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.proj_mul(&acc, &base);
            }
            base = self.proj_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Least `n ≥ 1` with `x^n` scalar.
    pub fn proj_order(&self, x: &ProjElem) -> u64 {
        let id = self.proj_identity();
        let mut acc = *x;
        let mut n = 1;
        while acc != id {
            acc = self.proj_mul(&acc, x);
            n += 1;
        }
        n
    }

    /// Whether the determinant of a representative is a square in the
    /// entry field, i.e. whether the element lies in `PSL(2, F)`.
    pub fn det_is_square(&self, x: &ProjElem) -> bool {
        self.field.is_square(self.det(&x.0))
    }
}

/// Basis of the nullspace of `rows · v = 0` for `v ∈ F⁴`.
fn nullspace(f: &FieldCtx, mut rows: Vec<[FieldElem; 4]>) -> Vec<[FieldElem; 4]> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..4 {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != f.zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = f.inv(rows[rank][col]).unwrap();
        rows[rank] = rows[rank].map(|e| f.mul(e, inv));
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != f.zero() {
                let factor = rows[r][col];
                for c in 0..4 {
                    rows[r][c] = f.sub(rows[r][c], f.mul(factor, rows[rank][c]));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (0..4)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [f.zero(); 4];
            v[free] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[i][free]);
            }
            v
        })
        .collect()
}

/// Rows of the linear system `X·a = sign·b·X` in the entries of `X`.
fn intertwining_rows(f: &FieldCtx, a: &Mat2, b: &Mat2, sign: i8) -> Vec<[FieldElem; 4]> {
    let a = [[a.a, a.b], [a.c, a.d]];
    let b = [[b.a, b.b], [b.c, b.d]];
    let s = if sign > 0 { f.one() } else { f.from_i64(-1) };
    let mut rows = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            let mut row = [f.zero(); 4];
            for u in 0..2 {
                for v in 0..2 {
                    let mut coef = f.zero();
                    if u == i {
                        coef = f.add(coef, a[v][j]);
                    }
                    if v == j {
                        coef = f.sub(coef, f.mul(s, b[i][u]));
                    }
                    row[2 * u + v] = coef;
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Nonsingular candidates spanned by a nullspace basis: each basis vector,
/// then pairwise sums.
fn candidates(basis: &[[FieldElem; 4]], f: &FieldCtx) -> Vec<Mat2> {
    let mut out: Vec<Mat2> = basis.iter().map(|v| Mat2::from_entries(*v)).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            out.push(Mat2::from_entries(std::array::from_fn(|c| f.add(basis[i][c], basis[j][c]))));
        }
    }
    out
}

const SIGN_PAIRS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// The raw generator matrices and the quantity `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    pub r: Mat2,
    pub s: Mat2,
    pub d: FieldElem,
}

/// Builds `R`, `S` with `ξ_k = ξ_ℓ = ξ` (the self-dual type `ℓ = k`).
pub fn build_generators(k: u64, zeta: FieldElem, xi: FieldElem, ctx: &FieldCtx) -> Result<Generators> {
    build_generators_mixed(k, k, xi, xi, ctx).and_then(|g| {
        let f = ctx;
        let expected = f.mul(f.from_i64(2), f.add(zeta, f.inv(zeta).unwrap()));
        ensure!(g.d == expected, Verification, "D ≠ 2(ζ + ζ⁻¹)");
        Ok(g)
    })
}

/// General-type builder for primitive `2k`-th and `2ℓ`-th roots `ξ_k`, `ξ_ℓ`.
pub fn build_generators_mixed(
    k: u64,
    l: u64,
    xi_k: FieldElem,
    xi_l: FieldElem,
    ctx: &FieldCtx,
) -> Result<Generators> {
    let f = ctx;
    let ring = MatrixRing::new(*ctx);
    ensure!(k >= 3 && l >= 3, InvalidInput, "type entries must be >= 3");
    let xk_inv = f.inv(xi_k).ok_or_else(|| Error::InvalidInput("ξ_k = 0".into()))?;
    let xl_inv = f.inv(xi_l).ok_or_else(|| Error::InvalidInput("ξ_ℓ = 0".into()))?;
    let d = f.add(
        f.add(f.square(xi_k), f.square(xk_inv)),
        f.add(f.square(xi_l), f.square(xl_inv)),
    );
    ensure!(d != f.zero(), Verification, "D = 0; the construction does not apply");
    let pre = f
        .inv(f.sub(xi_k, xk_inv))
        .ok_or_else(|| Error::Verification("ξ_k − ξ_k⁻¹ = 0".into()))?;
    let tl = f.add(xi_l, xl_inv);
    let r = Mat2 { a: xi_k, b: f.zero(), c: f.zero(), d: xk_inv };
    let s = ring.scale(
        &Mat2 { a: f.neg(f.mul(tl, xk_inv)), b: f.neg(d), c: f.one(), d: f.mul(tl, xi_k) },
        pre,
    );
    ensure!(ring.det(&r) == f.one(), Internal, "det R ≠ 1");
    ensure!(ring.det(&s) == f.one(), Internal, "det S ≠ 1");
    Ok(Generators { r, s, d })
}

/// A reflection `Z` with `ZRZ⁻¹ = R⁻¹` and `ZSZ⁻¹ = S⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reflection {
    pub z: ProjElem,
    /// Scalars `(σ, τ)` with `ZR = σR⁻¹Z`, `ZS = τS⁻¹Z` for the det-1 inputs.
    pub signs: (i8, i8),
    pub det_is_square: bool,
}

/// Solves for `Z` over the four sign combinations, keeping the first
/// nonsingular solution with square determinant and `Z²` scalar.
pub fn find_reflection(ring: &MatrixRing, r: &Mat2, s: &Mat2) -> Result<Reflection> {
    let f = &ring.field;
    let r_inv = ring.inv(r).ok_or_else(|| Error::InvalidInput("R is singular".into()))?;
    let s_inv = ring.inv(s).ok_or_else(|| Error::InvalidInput("S is singular".into()))?;
    let id = ring.proj_identity();
    let (pr, ps) = (ring.proj(r).unwrap(), ring.proj(s).unwrap());
    for (sr, ss) in SIGN_PAIRS {
        let mut rows = intertwining_rows(f, r, &r_inv, sr);
        rows.extend(intertwining_rows(f, s, &s_inv, ss));
        for cand in candidates(&nullspace(f, rows), f) {
            let Some(z) = ring.proj(&cand) else { continue };
            if !ring.det_is_square(&z) || ring.proj_mul(&z, &z) != id {
                continue;
            }
            ensure!(ring.conj(&z, &pr) == ring.proj_inv(&pr), Internal, "ZRZ⁻¹ ≠ R⁻¹");
            ensure!(ring.conj(&z, &ps) == ring.proj_inv(&ps), Internal, "ZSZ⁻¹ ≠ S⁻¹");
            return Ok(Reflection { z, signs: (sr, ss), det_is_square: true });
        }
    }
    Err(Error::Verification(
        "no reflection with square determinant inverts both R and S".into(),
    ))
}

/// `(x, y, z) = (ZS, RZ, Z)` with the relator checks.
pub fn involution_triple(
    ring: &MatrixRing,
    r: &ProjElem,
    s: &ProjElem,
    z: &ProjElem,
) -> Result<[ProjElem; 3]> {
    let id = ring.proj_identity();
    let x = ring.proj_mul(z, s);
    let y = ring.proj_mul(r, z);
    let triple = [x, y, *z];
    for (name, g) in ["x", "y", "z"].iter().zip(&triple) {
        ensure!(*g != id, Verification, "{name} is trivial");
        ensure!(ring.proj_mul(g, g) == id, Verification, "{name}² ≠ 1");
    }
    ensure!(x != y && y != *z && x != *z, Verification, "x, y, z not pairwise distinct");
    let xy = ring.proj_mul(&x, &y);
    ensure!(ring.proj_mul(&xy, &xy) == id, Verification, "(xy)² ≠ 1");
    ensure!(ring.proj_mul(&y, z) == *r, Verification, "yz ≠ R");
    ensure!(ring.proj_mul(z, &x) == *s, Verification, "zx ≠ S");
    Ok(triple)
}

/// Some `T` with `T·from[i]·T⁻¹ = to[i]` for all three entries, searched in
/// `PGL(2, F)`.
///
/// Conjugation preserves determinants, so on representatives the equation is
/// `T·from[i] = λᵢ·to[i]·T` with `λᵢ² = det(from[i])/det(to[i])`; the two
/// square roots give the eight sign patterns. `None` means no such matrix
/// exists over the ambient field.
pub fn find_conjugator(ring: &MatrixRing, from: &[ProjElem; 3], to: &[ProjElem; 3]) -> Option<ProjElem> {
    let f = &ring.field;
    let mut scaled_targets = Vec::with_capacity(3);
    for (a, b) in from.iter().zip(to) {
        let ratio = f.div(ring.det(a.matrix()), ring.det(b.matrix()))?;
        let lambda = f.sqrt(ratio)?;
        scaled_targets.push(ring.scale(b.matrix(), lambda));
    }
    for mask in 0..8u8 {
        let mut rows = Vec::with_capacity(12);
        for i in 0..3 {
            let sign = if mask >> i & 1 == 0 { 1 } else { -1 };
            rows.extend(intertwining_rows(f, from[i].matrix(), &scaled_targets[i], sign));
        }
        for cand in candidates(&nullspace(f, rows), f) {
            let Some(t) = ring.proj(&cand) else { continue };
            if (0..3).all(|i| ring.conj(&t, &from[i]) == to[i]) {
                return Some(t);
            }
        }
    }
    None
}

/// A finite matrix group listed in breadth-first order from the identity.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub elements: Vec<ProjElem>,
    index: HashMap<ProjElem, u32>,
}

impl GroupTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, g: &ProjElem) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn contains(&self, g: &ProjElem) -> bool {
        self.index.contains_key(g)
    }

    /// The permutation `h ↦ h·g` of element indices.
    pub fn right_mul_perm(&self, ring: &MatrixRing, g: &ProjElem) -> Result<Vec<u32>> {
        self.elements
            .iter()
            .map(|h| {
                self.index.get(&ring.proj_mul(h, g)).copied().ok_or_else(|| {
                    Error::InvalidInput(format!("{g} does not preserve the group"))
                })
            })
            .collect()
    }
}

/// Closure of `gens` under right multiplication; fails past `cap` elements.
pub fn enumerate_group(ring: &MatrixRing, gens: &[ProjElem], cap: usize) -> Result<GroupTable> {
    let id = ring.proj_identity();
    let mut elements = vec![id];
    let mut index = HashMap::from([(id, 0u32)]);
    let mut queue = VecDeque::from([id]);
    while let Some(h) = queue.pop_front() {
        for g in gens {
            let prod = ring.proj_mul(&h, g);
            if !index.contains_key(&prod) {
                ensure!(
                    elements.len() < cap,
                    Resource,
                    "group enumeration exceeded the cap of {cap} elements"
                );
                index.insert(prod, elements.len() as u32);
                elements.push(prod);
                queue.push_back(prod);
            }
        }
    }
    Ok(GroupTable { elements, index })
}

/// `|PSL(2, p)| = p(p² − 1)/2`.
pub fn psl2_order(p: u64) -> BigUint {
    let p = BigUint::from(p);
    &p * (&p * &p - 1u32) / 2u32
}

/// Everything the matrix stage produces for one `(k, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSeed {
    pub k: u64,
    pub p: u64,
    pub ctx: FieldCtx,
    pub epsilon: i8,
    /// Extension exponent of the group field; always 1 here.
    pub e: u32,
    pub zeta: FieldElem,
    pub xi: FieldElem,
    pub d: FieldElem,
    /// Det-1 representatives as built.
    pub r_raw: Mat2,
    pub s_raw: Mat2,
    pub r: ProjElem,
    pub s: ProjElem,
    pub reflection: Reflection,
    pub x: ProjElem,
    pub y: ProjElem,
    pub z: ProjElem,
    pub minus_d_is_square: bool,
}

impl MapSeed {
    /// Runs `ζ → ξ → R, S → Z → (x, y, z)` with every check along the way.
    pub fn build(k: u64, p: u64) -> Result<MapSeed> {
        let sol = solve_zeta(k, p)?;
        let ctx = sol.ctx;
        let xi = xi_from_zeta(sol.zeta, k, &ctx)?;
        let gens = build_generators(k, sol.zeta, xi, &ctx)?;
        let ring = MatrixRing::new(ctx);

        // −D = 4·3⁻¹, a square exactly when 3 is.
        let minus_d = ctx.neg(gens.d);
        ensure!(
            minus_d == ctx.mul(ctx.from_i64(4), ctx.inv(ctx.from_i64(3)).unwrap()),
            Internal,
            "−D ≠ 4/3"
        );
        ensure!(minus_d.is_base(), Internal, "D is not in the prime field");
        let minus_d_is_square = legendre(minus_d.a0 as i64, p) == 1;
        ensure!(legendre(3, p) == 1, Verification, "3 is not a square mod {p}");
        ensure!(minus_d_is_square, Verification, "−D is not a square mod {p}: map would be orientable");

        let r = ring.proj(&gens.r).unwrap();
        let s = ring.proj(&gens.s).unwrap();
        ensure!(ring.proj_order(&r) == k, Verification, "ord(R) ≠ {k}");
        ensure!(ring.proj_order(&s) == k, Verification, "ord(S) ≠ {k}");
        let rs = ring.mul(&gens.r, &gens.s);
        ensure!(ring.trace(&rs) == ctx.zero(), Verification, "trace(RS) ≠ 0");
        ensure!(ring.proj_order(&ring.proj(&rs).unwrap()) == 2, Verification, "ord(RS) ≠ 2");

        let reflection = find_reflection(&ring, &gens.r, &gens.s)?;
        let [x, y, z] = involution_triple(&ring, &r, &s, &reflection.z)?;
        Ok(MapSeed {
            k,
            p,
            ctx,
            epsilon: sol.epsilon,
            e: 1,
            zeta: sol.zeta,
            xi,
            d: gens.d,
            r_raw: gens.r,
            s_raw: gens.s,
            r,
            s,
            reflection,
            x,
            y,
            z,
            minus_d_is_square,
        })
    }

    pub fn ring(&self) -> MatrixRing {
        MatrixRing::new(self.ctx)
    }

    pub fn triple(&self) -> [ProjElem; 3] {
        [self.x, self.y, self.z]
    }

    pub fn expected_order(&self) -> BigUint {
        psl2_order(self.p)
    }

    /// Enumerates `⟨R, S⟩` and checks it has the order of `PSL(2, p)` and
    /// contains the reflection.
    pub fn enumerate(&self, cap: usize) -> Result<GroupTable> {
        let ring = self.ring();
        let table = enumerate_group(&ring, &[self.r, self.s], cap)?;
        let expected = self.expected_order();
        ensure!(table.len() != 60, Verification, "⟨R,S⟩ is the exceptional A5");
        ensure!(
            BigUint::from(table.len()) == expected,
            Verification,
            "|⟨R,S⟩| = {}, expected {expected}",
            table.len()
        );
        ensure!(table.contains(&self.z), Verification, "Z is not in ⟨R,S⟩");
        Ok(table)
    }

    /// Matrix witness for self-duality: `(x, y, z) ↦ (y, x, z)`.
    pub fn duality_witness(&self) -> Option<ProjElem> {
        find_conjugator(&self.ring(), &self.triple(), &[self.y, self.x, self.z])
    }

    /// Matrix witness for self-Petrie-duality: `(x, y, z) ↦ (xy, y, z)`.
    pub fn petrie_witness(&self) -> Option<ProjElem> {
        let ring = self.ring();
        let xy = ring.proj_mul(&self.x, &self.y);
        find_conjugator(&ring, &self.triple(), &[xy, self.y, self.z])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(a: u64) -> FieldElem {
        FieldElem::base(a)
    }

    #[test]
    fn generators_k5_p11() {
        let ctx = FieldCtx::prime(11).unwrap();
        let g = build_generators(5, fe(9), fe(8), &ctx).unwrap();
        assert_eq!(g.d, fe(6));
        let ring = MatrixRing::new(ctx);
        assert_eq!(ring.proj_order(&ring.proj(&g.r).unwrap()), 5);
        assert_eq!(ring.proj_order(&ring.proj(&g.s).unwrap()), 5);
        let rs = ring.proj(&ring.mul(&g.r, &g.s)).unwrap();
        assert_eq!(ring.proj_order(&rs), 2);
        assert_eq!(ring.proj_order(&ring.proj_identity()), 1);
    }

    #[test]
    fn generators_k9_p73() {
        let ctx = FieldCtx::prime(73).unwrap();
        let xi = xi_from_zeta(fe(16), 9, &ctx).unwrap();
        let g = build_generators(9, fe(16), xi, &ctx).unwrap();
        assert_eq!(g.d, fe(23));
        assert_eq!(g.d, ctx.neg(ctx.mul(fe(4), ctx.inv(fe(3)).unwrap())));
        let ring = MatrixRing::new(ctx);
        assert_eq!(ring.proj_order(&ring.proj(&g.r).unwrap()), 9);
        assert_eq!(ring.proj_order(&ring.proj(&g.s).unwrap()), 9);
    }

    #[test]
    fn projective_normal_form() {
        let ctx = FieldCtx::prime(11).unwrap();
        let ring = MatrixRing::new(ctx);
        let m = Mat2 { a: fe(0), b: fe(3), c: fe(5), d: fe(7) };
        let pm = ring.proj(&m).unwrap();
        assert_eq!(pm.matrix().b, fe(1));
        assert_eq!(ring.proj(&ring.scale(&m, fe(6))).unwrap(), pm);
        assert_eq!(ring.proj(&ring.scale(&m, fe(10))).unwrap(), pm);
        assert!(ring.proj(&Mat2 { a: fe(1), b: fe(2), c: fe(2), d: fe(4) }).is_none());
    }

    #[test]
    fn nullspace_of_commutant_of_a_diagonal() {
        // X·diag(2,3) = diag(2,3)·X forces X diagonal: nullspace dimension 2
        let ctx = FieldCtx::prime(11).unwrap();
        let dmat = Mat2 { a: fe(2), b: fe(0), c: fe(0), d: fe(3) };
        let basis = nullspace(&ctx, intertwining_rows(&ctx, &dmat, &dmat, 1));
        assert_eq!(basis.len(), 2);
        for v in basis {
            assert_eq!(v[1], fe(0));
            assert_eq!(v[2], fe(0));
        }
    }

    #[test]
    fn seed_k5_p11() {
        let seed = MapSeed::build(5, 11).unwrap();
        assert_eq!(seed.epsilon, 1);
        assert_eq!(seed.d, fe(6));
        assert!(seed.minus_d_is_square);
        let ring = seed.ring();
        // Z = [0 D; 1 0] up to scalars
        let expected_z = ring.proj(&Mat2 { a: fe(0), b: seed.d, c: fe(1), d: fe(0) }).unwrap();
        assert_eq!(seed.z, expected_z);
        assert_eq!(ring.conj(&seed.z, &seed.r), ring.proj_inv(&seed.r));
        let table = seed.enumerate(10_000).unwrap();
        assert_eq!(table.len(), 660);
        assert!(table.contains(&seed.x) && table.contains(&seed.y));
    }

    #[test]
    fn seed_k5_witnesses_and_their_squares() {
        let seed = MapSeed::build(5, 11).unwrap();
        let ring = seed.ring();
        let triple = seed.triple();
        assert_eq!(find_conjugator(&ring, &triple, &triple), Some(ring.proj_identity()));
        for t in [seed.duality_witness().unwrap(), seed.petrie_witness().unwrap()] {
            // T² conjugates the triple to itself, so it must be trivial.
            let t2 = ring.proj_mul(&t, &t);
            for g in &triple {
                assert_eq!(ring.conj(&t2, g), *g);
            }
            assert_eq!(t2, ring.proj_identity());
        }
    }

    #[test]
    fn seed_k7_p13_over_quadratic_field() {
        let seed = MapSeed::build(7, 13).unwrap();
        assert_eq!(seed.epsilon, -1);
        assert_eq!(seed.ctx.degree(), 2);
        let table = seed.enumerate(10_000).unwrap();
        assert_eq!(table.len(), 1092);
        assert!(seed.duality_witness().is_some());
        assert!(seed.petrie_witness().is_some());
    }

    #[test]
    fn enumeration_cap_is_a_resource_error() {
        let seed = MapSeed::build(5, 11).unwrap();
        assert!(matches!(seed.enumerate(100), Err(Error::Resource(_))));
    }

    #[test]
    fn conjugator_absent_when_orders_differ() {
        let seed = MapSeed::build(5, 11).unwrap();
        let ring = seed.ring();
        // z is an involution, R has order 5: no T can carry one to the other
        assert!(find_conjugator(&ring, &seed.triple(), &[seed.x, seed.y, seed.r]).is_none());
    }
}
