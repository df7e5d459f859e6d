//! Corner voltage assignments and their lifts.
//!
//! A corner is a pair `{g, gz}` of flags. With `|G|/2` corners and the voltage
//! group `H = Z_n^(|G|/2)`, corner `i` carries the unit vector `e_i`: crossing
//! the corner's `z`-edge from its lower-indexed flag adds `e_i`, crossing back
//! subtracts it. `x` and `y` carry trivial voltage. Lifted flags are pairs
//! `(g, v)` with `v ∈ H`.
//!
//! Small bases are lifted exhaustively; for large bases only the cycle
//! structure of individual words is walked, with sparse voltage vectors.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::dec;
use crate::error::{ensure, Error, Result};
use crate::flagmap::{Color, MapInvariants, RegularMap, Trinity};

/// Default cap on the number of lifted flags materialized at once.
pub const DEFAULT_LIFT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerVoltage {
    n: u32,
    /// Corner index of each flag.
    corner_of: Vec<u32>,
    /// Whether crossing `z` from this flag adds (rather than subtracts).
    positive: Vec<bool>,
    /// Coordinate of `H` carried by each corner.
    assignment: Vec<u32>,
}

impl CornerVoltage {
    /// Corners in order of their lower flag index, corner `i ↦ e_i`.
    pub fn assign(map: &RegularMap, n: u32) -> Result<Self> {
        let corners = Self::corner_count(map);
        Self::with_assignment(map, n, (0..corners as u32).collect())
    }

    /// Arbitrary corner-to-coordinate assignment; need not be a bijection.
    pub fn with_assignment(map: &RegularMap, n: u32, assignment: Vec<u32>) -> Result<Self> {
        ensure!(n % 2 == 1, InvalidInput, "voltage modulus n = {n} must be odd");
        let flags = map.flag_count();
        ensure!(flags % 2 == 0, InvalidInput, "flag count {flags} is odd");
        let z = map.perm(Color::Z);
        let mut corner_of = vec![0u32; flags];
        let mut positive = vec![false; flags];
        let mut next = 0u32;
        for f in 0..flags {
            let g = z[f] as usize;
            if f < g {
                corner_of[f] = next;
                corner_of[g] = next;
                positive[f] = true;
                next += 1;
            }
        }
        ensure!(
            assignment.len() == next as usize,
            InvalidInput,
            "assignment covers {} corners, map has {next}",
            assignment.len()
        );
        ensure!(
            assignment.iter().all(|&a| a < next),
            InvalidInput,
            "assignment refers to a coordinate past {next}"
        );
        Ok(CornerVoltage { n, corner_of, positive, assignment })
    }

    fn corner_count(map: &RegularMap) -> usize {
        map.flag_count() / 2
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Dimension of `H`, i.e. `|G|/2`.
    pub fn dim(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.dim()];
        self.assignment.iter().all(|&a| !std::mem::replace(&mut seen[a as usize], true))
    }

    /// Coordinate and sign picked up when crossing `z` from `flag`.
    #[inline]
    fn z_voltage(&self, flag: usize) -> (u32, bool) {
        (self.assignment[self.corner_of[flag] as usize], self.positive[flag])
    }
}

/// A lifted flag `(base, v)` with `v` stored as sorted nonzero coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftedFlag {
    pub base: u32,
    pub v: Vec<(u32, u32)>,
}

impl LiftedFlag {
    pub fn at_base(base: usize) -> Self {
        LiftedFlag { base: base as u32, v: Vec::new() }
    }
}

fn sparse_add(v: &mut Vec<(u32, u32)>, coord: u32, delta: u32, n: u32) {
    match v.binary_search_by_key(&coord, |&(c, _)| c) {
        Ok(i) => {
            let val = (v[i].1 + delta) % n;
            if val == 0 {
                v.remove(i);
            } else {
                v[i].1 = val;
            }
        }
        Err(i) => {
            if delta % n != 0 {
                v.insert(i, (coord, delta % n));
            }
        }
    }
}

/// Moves a lifted flag along one colored edge.
pub fn lifted_step(map: &RegularMap, cv: &CornerVoltage, f: &LiftedFlag, color: Color) -> LiftedFlag {
    let base = f.base as usize;
    let mut v = f.v.clone();
    if color == Color::Z {
        let (coord, plus) = cv.z_voltage(base);
        let delta = if plus { 1 } else { cv.n - 1 };
        sparse_add(&mut v, coord, delta, cv.n);
    }
    LiftedFlag { base: map.step(base, color) as u32, v }
}

/// Least `m ≥ 1` with `word^m` fixing `start` in the lift.
pub fn orbit_order(map: &RegularMap, cv: &CornerVoltage, start: &LiftedFlag, word: &[Color]) -> Result<u64> {
    ensure!(!word.is_empty(), InvalidInput, "empty word");
    let base_order = {
        let mut f = map.walk(start.base as usize, word);
        let mut m = 1u64;
        while f != start.base as usize {
            f = map.walk(f, word);
            m += 1;
        }
        m
    };
    let bound = base_order * cv.n as u64;
    let mut cur = start.clone();
    for m in 1..=bound {
        for &c in word {
            cur = lifted_step(map, cv, &cur, c);
        }
        if cur == *start {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!("orbit of {word:?} did not close within {bound} steps")))
}

/// `n^e` as a big integer.
fn big_pow(n: u32, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(n), e as usize)
}

/// Predicted number of components, `n^(|G|/4 − 1)`.
pub fn predicted_component_count(group_order: u64, n: u32) -> BigUint {
    if group_order < 4 {
        return BigUint::one();
    }
    big_pow(n, group_order / 4 - 1)
}

/// Predicted order of the lifted automorphism group, `n^(1 + |G|/4)·|G|`.
pub fn predicted_group_order(group_order: u64, n: u32) -> BigUint {
    big_pow(n, 1 + group_order / 4) * group_order
}

/// The whole lifted flag set with component labels.
#[derive(Clone, Debug)]
pub struct EnumeratedLift<'a> {
    map: &'a RegularMap,
    cv: &'a CornerVoltage,
    /// `n^dim`, the number of voltage vectors.
    fiber: u64,
    /// Component label per lifted flag id `base·fiber + code`.
    labels: Vec<u32>,
    sizes: Vec<u64>,
}

impl<'a> EnumeratedLift<'a> {
    /// Enumerates every lifted flag and labels components; fails if the lift
    /// has more than `budget` flags.
    pub fn new(map: &'a RegularMap, cv: &'a CornerVoltage, budget: u64) -> Result<Self> {
        let total = big_pow(cv.n, cv.dim() as u64) * map.flag_count();
        ensure!(
            total <= BigUint::from(budget),
            Resource,
            "lift has {}^{}·{} flags, over the enumeration budget of {budget}; use orbit mode",
            cv.n,
            cv.dim(),
            map.flag_count()
        );
        let fiber = big_pow(cv.n, cv.dim() as u64).to_u64().unwrap();
        let total = total.to_u64().unwrap() as usize;
        let mut lift = EnumeratedLift { map, cv, fiber, labels: vec![u32::MAX; total], sizes: Vec::new() };
        let mut stack = Vec::new();
        for start in 0..total {
            if lift.labels[start] != u32::MAX {
                continue;
            }
            let label = lift.sizes.len() as u32;
            let mut size = 0u64;
            lift.labels[start] = label;
            stack.push(start as u64);
            while let Some(id) = stack.pop() {
                size += 1;
                for c in Color::ALL {
                    let next = lift.step_id(id, c) as usize;
                    if lift.labels[next] == u32::MAX {
                        lift.labels[next] = label;
                        stack.push(next as u64);
                    }
                }
            }
            lift.sizes.push(size);
        }
        Ok(lift)
    }

    fn id(&self, base: usize, code: u64) -> u64 {
        base as u64 * self.fiber + code
    }

    fn split(&self, id: u64) -> (usize, u64) {
        ((id / self.fiber) as usize, id % self.fiber)
    }

    fn place(&self, coord: u32) -> u64 {
        (self.cv.n as u64).pow(coord)
    }

    fn digit(&self, code: u64, coord: u32) -> u64 {
        code / self.place(coord) % self.cv.n as u64
    }

    fn step_id(&self, id: u64, c: Color) -> u64 {
        let (base, mut code) = self.split(id);
        if c == Color::Z {
            let (coord, plus) = self.cv.z_voltage(base);
            let n = self.cv.n as u64;
            let d = self.digit(code, coord);
            let nd = if plus { (d + 1) % n } else { (d + n - 1) % n };
            code = code - d * self.place(coord) + nd * self.place(coord);
        }
        self.id(self.map.step(base, c), code)
    }

    /// Digit-wise sum of two voltage codes.
    fn add_codes(&self, a: u64, b: u64) -> u64 {
        let n = self.cv.n as u64;
        (0..self.cv.dim() as u32)
            .map(|i| (self.digit(a, i) + self.digit(b, i)) % n * self.place(i))
            .sum()
    }

    pub fn total_flags(&self) -> u64 {
        self.labels.len() as u64
    }

    pub fn component_sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn component_count(&self) -> u64 {
        self.sizes.len() as u64
    }

    fn members(&self, label: u32) -> Vec<u64> {
        (0..self.labels.len() as u64).filter(|&i| self.labels[i as usize] == label).collect()
    }

    /// Component `label` as a map in its own right, based at its first flag.
    pub fn component_map(&self, label: u32) -> Result<RegularMap> {
        let members = self.members(label);
        let local: std::collections::HashMap<u64, u32> =
            members.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
        let perm = |c: Color| -> Vec<u32> {
            members.iter().map(|&id| local[&self.step_id(id, c)]).collect()
        };
        RegularMap::from_perms([perm(Color::X), perm(Color::Y), perm(Color::Z)], 0)
    }

    /// Voltages `w` whose fiber translation `(g, v) ↦ (g, v + w)` maps the
    /// component onto itself.
    pub fn translation_group(&self, label: u32) -> Vec<u64> {
        let members = self.members(label);
        let (base0, _) = self.split(members[0]);
        let (_, code0) = self.split(members[0]);
        let n = self.cv.n as u64;
        let neg0: u64 = (0..self.cv.dim() as u32)
            .map(|i| (n - self.digit(code0, i)) % n * self.place(i))
            .sum();
        (0..self.fiber)
            .filter(|&code| self.labels[self.id(base0, code) as usize] == label)
            .map(|code| self.add_codes(code, neg0))
            .filter(|&w| {
                members.iter().all(|&id| {
                    let (b, c) = self.split(id);
                    self.labels[self.id(b, self.add_codes(c, w)) as usize] == label
                })
            })
            .collect()
    }

    /// Checks that the translations preserving component `label` form a
    /// group of order `n^(1+|G|/4)` that closes under addition, and that the
    /// component covers every base flag with fibers of exactly that size.
    pub fn normal_subgroup_check(&self, label: u32) -> bool {
        let group = self.translation_group(label);
        let expected = big_pow(self.cv.n, 1 + self.map.flag_count() as u64 / 4);
        if BigUint::from(group.len()) != expected {
            return false;
        }
        let set: std::collections::HashSet<u64> = group.iter().copied().collect();
        if !group.iter().all(|&a| group.iter().all(|&b| set.contains(&self.add_codes(a, b)))) {
            return false;
        }
        let mut fiber_sizes = vec![0usize; self.map.flag_count()];
        for id in self.members(label) {
            fiber_sizes[self.split(id).0] += 1;
        }
        fiber_sizes.iter().all(|&s| s == group.len())
    }
}

/// Summary of an exhaustive lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub n: u32,
    pub base_flags: u64,
    pub total_flags: u64,
    pub size: u64,
    pub component_count: u64,
    pub homogeneous: bool,
    #[serde(with = "dec")]
    pub predicted_count: BigUint,
    #[serde(with = "dec")]
    pub group_order_predicted: BigUint,
    pub invariants: MapInvariants,
    pub regular: bool,
    pub trinity: Trinity,
    pub translation_group_order: u64,
    pub semidirect_certified: bool,
}

impl ComponentReport {
    pub fn count_matches_prediction(&self) -> bool {
        BigUint::from(self.component_count) == self.predicted_count
    }
}

/// Enumerates the lift of `map` and analyses the component of the flag
/// `(base, 0)`.
pub fn component_bfs(map: &RegularMap, cv: &CornerVoltage, budget: u64) -> Result<ComponentReport> {
    let lift = EnumeratedLift::new(map, cv, budget)?;
    let label = lift.labels[lift.id(map.base(), 0) as usize];
    let component = lift.component_map(label)?;
    let regular = component.is_regular();
    let trinity = if regular {
        component.trinity_check()?
    } else {
        Trinity { self_dual: false, self_petrie: false }
    };
    let sizes = lift.component_sizes();
    let group_order = map.flag_count() as u64;
    Ok(ComponentReport {
        n: cv.n(),
        base_flags: group_order,
        total_flags: lift.total_flags(),
        size: sizes[label as usize],
        component_count: lift.component_count(),
        homogeneous: sizes.iter().all(|&s| s == sizes[0]),
        predicted_count: predicted_component_count(group_order, cv.n()),
        group_order_predicted: predicted_group_order(group_order, cv.n()),
        invariants: component.invariants(),
        regular,
        trinity,
        translation_group_order: lift.translation_group(label).len() as u64,
        semidirect_certified: lift.normal_subgroup_check(label),
    })
}

/// Orders of `yz`, `zx`, `xy`, `xyz` in the lift, walked from `(base, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub n: u32,
    pub yz: u64,
    pub zx: u64,
    pub xy: u64,
    pub xyz: u64,
}

pub fn orbit_report(map: &RegularMap, cv: &CornerVoltage) -> Result<OrbitReport> {
    use Color::*;
    let start = LiftedFlag::at_base(map.base());
    let order = |w: &[Color]| orbit_order(map, cv, &start, w);
    Ok(OrbitReport {
        n: cv.n(),
        yz: order(&[Y, Z])?,
        zx: order(&[Z, X])?,
        xy: order(&[X, Y])?,
        xyz: order(&[X, Y, Z])?,
    })
}
