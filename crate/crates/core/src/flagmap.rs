//! Regular maps as three fixed-point-free involutions on a flag set.
//!
//! For a group `G = ⟨x, y, z⟩` the flags are the elements of `G` and the
//! generator `c` acts by right multiplication `g ↦ g·c`. Vertices, edges and
//! faces are the orbits of `⟨y,z⟩`, `⟨x,y⟩` and `⟨z,x⟩`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// One of the three flag involutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    X,
    Y,
    Z,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::X, Color::Y, Color::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::X => "x",
            Color::Y => "y",
            Color::Z => "z",
        }
    }

    pub fn parse_word(word: &str) -> Result<Vec<Color>> {
        word.chars()
            .map(|c| match c {
                'x' => Ok(Color::X),
                'y' => Ok(Color::Y),
                'z' => Ok(Color::Z),
                other => Err(Error::InvalidInput(format!("'{other}' is not one of x, y, z"))),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularMap {
    perms: [Vec<u32>; 3],
    base: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapInvariants {
    pub flags: u64,
    pub vertices: u64,
    pub edges: u64,
    pub faces: u64,
    pub euler_char: i64,
    pub type_k: u64,
    pub type_l: u64,
    pub petrie_len: u64,
    pub orientable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trinity {
    pub self_dual: bool,
    pub self_petrie: bool,
}

impl RegularMap {
    /// Builds a map from explicit involutions; checks they are fixed-point
    /// free involutions with `x` and `y` commuting.
    pub fn from_perms(perms: [Vec<u32>; 3], base: usize) -> Result<Self> {
        let n = perms[0].len();
        ensure!(n > 0, InvalidInput, "empty flag set");
        ensure!(base < n, InvalidInput, "base flag {base} out of range");
        for (c, p) in Color::ALL.iter().zip(&perms) {
            ensure!(p.len() == n, InvalidInput, "permutation {} has wrong length", c.name());
            for (i, &j) in p.iter().enumerate() {
                ensure!((j as usize) < n, InvalidInput, "{} maps {i} out of range", c.name());
                ensure!(j as usize != i, InvalidInput, "{} fixes flag {i}", c.name());
                ensure!(p[j as usize] as usize == i, InvalidInput, "{} is not an involution", c.name());
            }
        }
        let [x, y, _] = &perms;
        ensure!(
            (0..n).all(|i| x[y[i] as usize] == y[x[i] as usize]),
            InvalidInput,
            "x and y do not commute"
        );
        Ok(RegularMap { perms, base: base as u32 })
    }

    /// Flags = group elements, `perm_c(g) = g·c`.
    pub fn from_group<E, F>(elements: &[E], gens: [E; 3], mul: F) -> Result<Self>
    where
        E: Clone + Eq + Hash,
        F: Fn(&E, &E) -> E,
    {
        let index: HashMap<&E, u32> =
            elements.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        ensure!(index.len() == elements.len(), InvalidInput, "repeated group elements");
        let perm = |g: &E| -> Result<Vec<u32>> {
            elements
                .iter()
                .map(|h| {
                    index
                        .get(&mul(h, g))
                        .copied()
                        .ok_or_else(|| Error::InvalidInput("element set not closed".into()))
                })
                .collect()
        };
        let [x, y, z] = &gens;
        let map = Self::from_perms([perm(x)?, perm(y)?, perm(z)?], 0)?;
        ensure!(map.is_connected(), InvalidInput, "x, y, z do not generate the group");
        Ok(map)
    }

    pub fn flag_count(&self) -> usize {
        self.perms[0].len()
    }

    pub fn base(&self) -> usize {
        self.base as usize
    }

    pub fn perm(&self, c: Color) -> &[u32] {
        &self.perms[c.index()]
    }

    #[inline]
    pub fn step(&self, flag: usize, c: Color) -> usize {
        self.perms[c.index()][flag] as usize
    }

    /// Applies the letters of `word` left to right.
    pub fn walk(&self, flag: usize, word: &[Color]) -> usize {
        word.iter().fold(flag, |f, &c| self.step(f, c))
    }

    /// Cycle length of `word` through the base flag; for a regular map this
    /// is the order of the word as a group element.
    pub fn word_order(&self, word: &[Color]) -> u64 {
        let start = self.base();
        let mut f = self.walk(start, word);
        let mut n = 1;
        while f != start {
            f = self.walk(f, word);
            n += 1;
        }
        n
    }

    fn is_connected(&self) -> bool {
        self.orbit_count(&Color::ALL) == 1
    }

    /// Number of orbits of the subgroup generated by `colors`.
    pub fn orbit_count(&self, colors: &[Color]) -> u64 {
        let n = self.flag_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(f) = stack.pop() {
                for &c in colors {
                    let g = self.step(f, c);
                    if !seen[g] {
                        seen[g] = true;
                        stack.push(g);
                    }
                }
            }
        }
        count
    }

    /// Orientable iff the flags 2-color so that every generator swaps colors.
    pub fn is_orientable(&self) -> bool {
        let n = self.flag_count();
        let mut color = vec![u8::MAX; n];
        let mut queue = VecDeque::from([self.base()]);
        color[self.base()] = 0;
        while let Some(f) = queue.pop_front() {
            for c in Color::ALL {
                let g = self.step(f, c);
                if color[g] == u8::MAX {
                    color[g] = 1 - color[f];
                    queue.push_back(g);
                } else if color[g] == color[f] {
                    return false;
                }
            }
        }
        true
    }

    pub fn invariants(&self) -> MapInvariants {
        use Color::*;
        let vertices = self.orbit_count(&[Y, Z]);
        let edges = self.orbit_count(&[X, Y]);
        let faces = self.orbit_count(&[Z, X]);
        MapInvariants {
            flags: self.flag_count() as u64,
            vertices,
            edges,
            faces,
            euler_char: vertices as i64 - edges as i64 + faces as i64,
            type_k: self.word_order(&[Y, Z]),
            type_l: self.word_order(&[Z, X]),
            petrie_len: self.word_order(&[X, Y, Z]),
            orientable: self.is_orientable(),
        }
    }

    /// Swaps the roles of vertices and faces: `(x, y, z) ↦ (y, x, z)`.
    pub fn dual(&self) -> RegularMap {
        let [x, y, z] = self.perms.clone();
        RegularMap { perms: [y, x, z], base: self.base }
    }

    /// Faces become the zig-zag walks: `(x, y, z) ↦ (xy, y, z)`.
    pub fn petrie(&self) -> RegularMap {
        let [x, y, z] = &self.perms;
        let xy = x.iter().map(|&f| y[f as usize]).collect();
        RegularMap { perms: [xy, y.clone(), z.clone()], base: self.base }
    }

    /// Tries the flag bijection forced by `base ↦ base`. For flag-transitive
    /// maps this decides isomorphism exactly.
    pub fn is_isomorphic_pointed(&self, other: &RegularMap) -> Result<bool> {
        ensure!(self.is_connected(), InvalidInput, "first map is not flag-connected");
        ensure!(other.is_connected(), InvalidInput, "second map is not flag-connected");
        if self.flag_count() != other.flag_count() {
            return Ok(false);
        }
        Ok(self.pointed_map_to(other, self.base(), other.base()).is_some())
    }

    /// The unique color-preserving bijection sending `from` to `to`, if the
    /// propagation is consistent.
    fn pointed_map_to(&self, other: &RegularMap, from: usize, to: usize) -> Option<Vec<u32>> {
        let n = self.flag_count();
        let mut image = vec![u32::MAX; n];
        let mut used = vec![false; n];
        image[from] = to as u32;
        used[to] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(f) = queue.pop_front() {
            let fi = image[f] as usize;
            for c in Color::ALL {
                let g = self.step(f, c);
                let gi = other.step(fi, c);
                if image[g] == u32::MAX {
                    if used[gi] {
                        return None;
                    }
                    image[g] = gi as u32;
                    used[gi] = true;
                    queue.push_back(g);
                } else if image[g] as usize != gi {
                    return None;
                }
            }
        }
        Some(image)
    }

    /// Whether the automorphism group is transitive on flags. Quadratic in
    /// the flag count; meant for small maps that were not built from a group.
    pub fn is_regular(&self) -> bool {
        self.is_connected()
            && (0..self.flag_count()).all(|f| self.pointed_map_to(self, self.base(), f).is_some())
    }

    pub fn trinity_check(&self) -> Result<Trinity> {
        Ok(Trinity {
            self_dual: self.is_isomorphic_pointed(&self.dual())?,
            self_petrie: self.is_isomorphic_pointed(&self.petrie())?,
        })
    }

    /// Graphviz rendering of the 3-edge-colored flag graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph flags {\n  node [shape=point];\n");
        for c in Color::ALL {
            let hue = match c {
                Color::X => "red",
                Color::Y => "blue",
                Color::Z => "darkgreen",
            };
            for (f, &g) in self.perm(c).iter().enumerate() {
                if f < g as usize {
                    let _ = writeln!(out, "  {f} -- {g} [color={hue}, label={}];", c.name());
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Small maps used as test bases and lift examples.
pub mod toys {
    use super::*;

    /// `Z₂³` with `x, y, z` the coordinate vectors: type (2,2), 8 flags.
    pub fn z2_cubed() -> RegularMap {
        let elements: Vec<u8> = (0..8).collect();
        RegularMap::from_group(&elements, [1, 2, 4], |a, b| a ^ b).expect("valid toy")
    }

    fn compose(p: &[u8; 4], q: &[u8; 4]) -> [u8; 4] {
        // apply p then q
        std::array::from_fn(|i| q[p[i] as usize])
    }

    fn symmetric_group_4() -> Vec<[u8; 4]> {
        let mut out = Vec::new();
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let v = [a, b, c, d];
                        let mut s = v;
                        s.sort();
                        if s == [0, 1, 2, 3] {
                            out.push(v);
                        }
                    }
                }
            }
        }
        out
    }

    /// The tetrahedron: `S₄` with `x = (0 1)`, `y = (2 3)`, `z = (1 2)`.
    pub fn tetrahedron() -> RegularMap {
        let s4 = symmetric_group_4();
        RegularMap::from_group(&s4, [[1, 0, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3]], compose)
            .expect("valid toy")
    }

    /// `S₃ × Z₂`: a theta graph on the sphere, type (3,2).
    pub fn theta() -> RegularMap {
        // elements (σ, c) of S3 × Z2 encoded as ([u8;3], u8)
        let mut s3 = Vec::new();
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    if a != b && b != c && a != c {
                        s3.push([a, b, c]);
                    }
                }
            }
        }
        let elements: Vec<([u8; 3], u8)> =
            s3.iter().flat_map(|&s| [(s, 0u8), (s, 1u8)]).collect();
        let mul = |p: &([u8; 3], u8), q: &([u8; 3], u8)| {
            (std::array::from_fn(|i| q.0[p.0[i] as usize]), p.1 ^ q.1)
        };
        let id = [0u8, 1, 2];
        RegularMap::from_group(&elements, [(id, 1), ([1, 0, 2], 0), ([0, 2, 1], 0)], mul)
            .expect("valid toy")
    }

    pub fn by_name(name: &str) -> Result<RegularMap> {
        match name {
            "z2cubed" => Ok(z2_cubed()),
            "tetrahedron" => Ok(tetrahedron()),
            "theta" => Ok(theta()),
            other => Err(Error::InvalidInput(format!(
                "unknown toy '{other}' (expected z2cubed, tetrahedron or theta)"
            ))),
        }
    }

    pub const NAMES: [&str; 3] = ["z2cubed", "tetrahedron", "theta"];
}

#[cfg(test)]
mod tests {
    use super::toys::*;
    use super::*;

    #[test]
    fn z2_cubed_invariants() {
        let m = z2_cubed();
        assert_eq!(m.flag_count(), 8);
        let inv = m.invariants();
        assert_eq!((inv.vertices, inv.edges, inv.faces, inv.euler_char), (2, 2, 2, 2));
        assert_eq!((inv.type_k, inv.type_l, inv.petrie_len), (2, 2, 2));
        assert_eq!(m.trinity_check().unwrap(), Trinity { self_dual: true, self_petrie: true });
    }

    #[test]
    fn tetrahedron_invariants() {
        let m = tetrahedron();
        assert_eq!(m.flag_count(), 24);
        let inv = m.invariants();
        assert_eq!((inv.vertices, inv.edges, inv.faces, inv.euler_char), (4, 6, 4, 2));
        assert_eq!((inv.type_k, inv.type_l, inv.petrie_len), (3, 3, 4));
        assert!(inv.orientable);
        assert_eq!(m.trinity_check().unwrap(), Trinity { self_dual: true, self_petrie: false });
        assert!(!m.is_isomorphic_pointed(&m.petrie()).unwrap());
    }

    #[test]
    fn theta_is_not_self_dual() {
        let m = theta();
        let inv = m.invariants();
        assert_eq!((inv.vertices, inv.edges, inv.faces), (2, 3, 3));
        assert_eq!((inv.type_k, inv.type_l), (3, 2));
        assert!(!m.trinity_check().unwrap().self_dual);
    }

    #[test]
    fn operators_are_involutions_and_keep_edges() {
        for m in [z2_cubed(), tetrahedron(), theta()] {
            assert_eq!(m.dual().dual(), m);
            assert_eq!(m.petrie().petrie(), m);
            let (inv, d, p) = (m.invariants(), m.dual().invariants(), m.petrie().invariants());
            assert_eq!((d.vertices, d.faces), (inv.faces, inv.vertices));
            assert_eq!((d.edges, d.euler_char), (inv.edges, inv.euler_char));
            assert_eq!((p.vertices, p.edges), (inv.vertices, inv.edges));
            assert_eq!(p.type_l, inv.petrie_len);
        }
    }

    #[test]
    fn regularity_of_group_maps() {
        assert!(z2_cubed().is_regular());
        assert!(tetrahedron().is_regular());
    }

    #[test]
    fn from_perms_rejects_bad_input() {
        let id = vec![0u32, 1];
        let swap = vec![1u32, 0];
        assert!(RegularMap::from_perms([id, swap.clone(), swap.clone()], 0).is_err());
        assert!(RegularMap::from_perms([swap.clone(), swap.clone(), swap.clone()], 5).is_err());
        let three = vec![1u32, 2, 0];
        assert!(RegularMap::from_perms([three.clone(), three.clone(), three], 0).is_err());
    }

    #[test]
    fn disconnected_map_is_rejected_by_isomorphism_test() {
        // two copies of a 2-flag... not possible with 3 fixed-point-free
        // commuting involutions on 2 flags, so use two disjoint Z2^3 copies
        let m = z2_cubed();
        let shift = |p: &[u32]| -> Vec<u32> {
            p.iter().copied().chain(p.iter().map(|&v| v + 8)).collect()
        };
        let doubled = RegularMap::from_perms(
            [shift(m.perm(Color::X)), shift(m.perm(Color::Y)), shift(m.perm(Color::Z))],
            0,
        )
        .unwrap();
        assert!(doubled.is_isomorphic_pointed(&doubled).is_err());
    }

    #[test]
    fn dot_export_lists_every_edge_once() {
        let dot = z2_cubed().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 12);
        assert!(dot.contains("label=z"));
    }

    #[test]
    fn word_parsing() {
        assert_eq!(Color::parse_word("xyz").unwrap(), vec![Color::X, Color::Y, Color::Z]);
        assert!(Color::parse_word("xw").is_err());
    }
}
