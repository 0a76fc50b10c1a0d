//! Double covers of graded signed graphs, stored through their involutory quotient.
//!
//! Quotient node `i` lifts to the cover nodes `2i` (reference representative)
//! and `2i + 1` (its image under the involution).

use std::collections::{BTreeMap, HashMap, VecDeque};

use num::bigint::BigInt;
use num::One;

use crate::complex::SimplicialComplex;
use crate::error::{pre, Error, Result};
use crate::exact::Rational;
use crate::Direction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoverNode {
    pub quotient_index: usize,
    pub flipped: bool,
}

impl CoverNode {
    pub fn index(self) -> usize {
        2 * self.quotient_index + self.flipped as usize
    }

    pub fn from_index(c: usize) -> Self {
        CoverNode { quotient_index: c / 2, flipped: c % 2 == 1 }
    }

    pub fn neg(self) -> Self {
        CoverNode { flipped: !self.flipped, ..self }
    }
}

#[derive(Clone, Debug)]
pub struct Cover {
    names: Vec<String>,
    dims: Vec<usize>,
    /// (parent, reference sign) per node.
    parents: Vec<Vec<(usize, i32)>>,
    /// (child, reference sign) per node.
    children: Vec<Vec<(usize, i32)>>,
    edges: Vec<(usize, usize, i32)>,
    strong: bool,
}

/// One representative per involutory pair; `flips[i]` selects `-u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub flips: Vec<bool>,
}

impl Orientation {
    pub fn reference(n: usize) -> Self {
        Orientation { flips: vec![false; n] }
    }

    pub fn sign(&self, i: usize) -> i32 {
        if self.flips[i] {
            -1
        } else {
            1
        }
    }

    pub fn node(&self, i: usize) -> CoverNode {
        CoverNode { quotient_index: i, flipped: self.flips[i] }
    }
}

#[derive(Clone, Debug)]
pub struct PathWeights {
    pub lp: Vec<BigInt>,
    pub rp: Vec<BigInt>,
}

impl PathWeights {
    pub fn h(&self, i: usize) -> Rational {
        Rational::new(self.lp[i].clone(), self.rp[i].clone())
    }

    /// `LP · RP`, the number of root-to-leaf paths through the node.
    pub fn d(&self, i: usize) -> BigInt {
        &self.lp[i] * &self.rp[i]
    }

    pub fn h_all(&self) -> Vec<Rational> {
        (0..self.lp.len()).map(|i| self.h(i)).collect()
    }

    pub fn d_all(&self) -> Vec<Rational> {
        (0..self.lp.len()).map(|i| Rational::from_integer(self.d(i))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Quotient,
    Cover,
    QuotientUp,
    QuotientDown,
    CoverUp,
    CoverDown,
}

#[derive(Clone, Debug)]
pub struct ComponentSet {
    pub kind: ComponentKind,
    pub dimension: Option<usize>,
    /// Quotient indices for quotient kinds, cover indices for cover kinds.
    pub members: Vec<Vec<usize>>,
}

impl ComponentSet {
    pub fn component_of(&self, node: usize) -> Option<usize> {
        self.members.iter().position(|m| m.contains(&node))
    }
}

/// Non-root down-components in dim k paired with non-leaf up-components in dim k-1.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub down: ComponentSet,
    pub up: ComponentSet,
    /// (index into `down.members`, index into `up.members`).
    pub pairs: Vec<(usize, usize)>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn group(nodes: &[usize], dsu: &mut Dsu) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &u in nodes {
        let r = dsu.find(u);
        groups.entry(r).or_default().push(u);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    for g in &mut out {
        g.sort();
    }
    out.sort_by_key(|g| g[0]);
    out
}

impl Cover {
    fn build(names: Vec<String>, dims: Vec<usize>, mut edges: Vec<(usize, usize, i32)>) -> Result<Self> {
        let n = names.len();
        edges.sort();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut strong = true;
        for w in edges.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return pre(format!("duplicate edge {} -> {}", names[w[0].0], names[w[0].1]));
            }
        }
        for &(c, p, s) in &edges {
            if dims[c] >= dims[p] {
                return pre(format!("edge {} -> {} does not increase dimension", names[c], names[p]));
            }
            if dims[p] != dims[c] + 1 {
                strong = false;
            }
            parents[c].push((p, s));
            children[p].push((c, s));
        }
        for v in parents.iter_mut().chain(children.iter_mut()) {
            v.sort();
        }
        Ok(Cover { names, dims, parents, children, edges, strong })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn cover_name(&self, c: usize) -> String {
        let n = CoverNode::from_index(c);
        if n.flipped {
            format!("-{}", self.names[n.quotient_index])
        } else {
            format!("+{}", self.names[n.quotient_index])
        }
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn nodes_of_dim(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dims[i] == k).collect()
    }

    pub fn is_strong(&self) -> bool {
        self.strong
    }

    /// Quotient edges as (child, parent, reference sign).
    pub fn edges(&self) -> &[(usize, usize, i32)] {
        &self.edges
    }

    pub fn parents(&self, i: usize) -> &[(usize, i32)] {
        &self.parents[i]
    }

    pub fn children(&self, i: usize) -> &[(usize, i32)] {
        &self.children[i]
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.parents[i].is_empty()
    }

    pub fn is_root(&self, i: usize) -> bool {
        self.children[i].is_empty()
    }

    pub fn leaves_and_roots(&self) -> (Vec<usize>, Vec<usize>) {
        let leaves = (0..self.len()).filter(|&i| self.is_leaf(i)).collect();
        let roots = (0..self.len()).filter(|&i| self.is_root(i)).collect();
        (leaves, roots)
    }

    /// Reference sign of the quotient edge `child ⊂ parent`.
    pub fn ref_sign(&self, parent: usize, child: usize) -> Option<i32> {
        self.parents[child].iter().find(|&&(p, _)| p == parent).map(|&(_, s)| s)
    }

    /// `[v : u]` on cover nodes, from the compatibility rules `[-v:u] = [v:-u] = -[v:u]`.
    pub fn cover_sign(&self, v: CoverNode, u: CoverNode) -> Option<i32> {
        let s = self.ref_sign(v.quotient_index, u.quotient_index)?;
        Some(if v.flipped != u.flipped { -s } else { s })
    }

    /// Sign of `[v:u]` under an orientation, as seen from the chosen representatives.
    pub fn oriented_sign(&self, o: &Orientation, parent: usize, child: usize) -> Option<i32> {
        self.ref_sign(parent, child).map(|s| s * o.sign(parent) * o.sign(child))
    }

    fn require_strong(&self) -> Result<()> {
        if self.strong {
            Ok(())
        } else {
            pre("up/down machinery requires a strong grading")
        }
    }

    pub fn path_weights(&self) -> PathWeights {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.dims[i]));
        let mut lp = vec![BigInt::one(); n];
        for &u in &order {
            if !self.is_leaf(u) {
                lp[u] = self.parents[u].iter().map(|&(p, _)| lp[p].clone()).sum();
            }
        }
        let mut rp = vec![BigInt::one(); n];
        for &u in order.iter().rev() {
            if !self.is_root(u) {
                rp[u] = self.children[u].iter().map(|&(c, _)| rp[c].clone()).sum();
            }
        }
        PathWeights { lp, rp }
    }

    pub fn components(&self, kind: ComponentKind, k: Option<usize>) -> Result<ComponentSet> {
        let quotient_kind = match kind {
            ComponentKind::Cover => ComponentKind::Quotient,
            ComponentKind::CoverUp => ComponentKind::QuotientUp,
            ComponentKind::CoverDown => ComponentKind::QuotientDown,
            other => other,
        };
        let members = match quotient_kind {
            ComponentKind::Quotient => {
                let mut dsu = Dsu((0..self.len()).collect());
                for &(c, p, _) in &self.edges {
                    dsu.union(c, p);
                }
                group(&(0..self.len()).collect::<Vec<_>>(), &mut dsu)
            }
            _ => {
                self.require_strong()?;
                let Some(k) = k else {
                    return pre("up/down components need a dimension");
                };
                let dir = if quotient_kind == ComponentKind::QuotientUp { Direction::Up } else { Direction::Down };
                self.directional_components(k, dir)
            }
        };
        let members = if kind == quotient_kind {
            members
        } else {
            members
                .into_iter()
                .map(|m| m.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect())
                .collect()
        };
        Ok(ComponentSet { kind, dimension: k, members })
    }

    fn directional_components(&self, k: usize, dir: Direction) -> Vec<Vec<usize>> {
        let nodes = self.nodes_of_dim(k);
        let mut dsu = Dsu((0..self.len()).collect());
        let shared = |u: usize| -> Vec<usize> {
            match dir {
                Direction::Up => self.parents[u].iter().map(|&(p, _)| p).collect(),
                Direction::Down => self.children[u].iter().map(|&(c, _)| c).collect(),
            }
        };
        for &u in &nodes {
            for w in shared(u) {
                let group = match dir {
                    Direction::Up => &self.children[w],
                    Direction::Down => &self.parents[w],
                };
                for &(u2, _) in group {
                    dsu.union(u, u2);
                }
            }
        }
        group(&nodes, &mut dsu)
    }

    /// A non-leaf (up) or non-root (down) component has a nonempty neighbourhood in that direction.
    pub fn is_trivial_component(&self, component: &[usize], dir: Direction) -> bool {
        component.iter().all(|&u| match dir {
            Direction::Up => self.is_leaf(u),
            Direction::Down => self.is_root(u),
        })
    }

    pub fn component_correspondence(&self, k: usize) -> Result<Correspondence> {
        self.require_strong()?;
        if k == 0 {
            return pre("component correspondence needs k >= 1");
        }
        let down = self.components(ComponentKind::QuotientDown, Some(k))?;
        let up = self.components(ComponentKind::QuotientUp, Some(k - 1))?;
        let mut pairs = Vec::new();
        for (di, comp) in down.members.iter().enumerate() {
            if self.is_trivial_component(comp, Direction::Down) {
                continue;
            }
            let mut faces: Vec<usize> =
                comp.iter().flat_map(|&u| self.children[u].iter().map(|&(c, _)| c)).collect();
            faces.sort();
            faces.dedup();
            let ui = up
                .component_of(faces[0])
                .ok_or_else(|| Error::Numeric("face missing from up-components".into()))?;
            if up.members[ui] != faces {
                return Err(Error::Numeric(format!("faces of down-component {di} do not form an up-component")));
            }
            let mut cofaces: Vec<usize> =
                up.members[ui].iter().flat_map(|&u| self.parents[u].iter().map(|&(p, _)| p)).collect();
            cofaces.sort();
            cofaces.dedup();
            if &cofaces != comp {
                return Err(Error::Numeric(format!("cofaces of up-component {ui} do not match")));
            }
            pairs.push((di, ui));
        }
        Ok(Correspondence { down, up, pairs })
    }

    /// Constraint `s_u s_u' = c` between two nodes of the component.
    fn coherence_constraints(&self, component: &[usize], dir: Direction) -> Vec<(usize, usize, i32)> {
        let inside: HashMap<usize, ()> = component.iter().map(|&u| (u, ())).collect();
        let mut out = Vec::new();
        for &u in component {
            let shared = match dir {
                Direction::Up => &self.parents[u],
                Direction::Down => &self.children[u],
            };
            for &(w, s1) in shared {
                let others = match dir {
                    Direction::Up => &self.children[w],
                    Direction::Down => &self.parents[w],
                };
                for &(u2, s2) in others {
                    if u2 > u && inside.contains_key(&u2) {
                        out.push((u, u2, s1 * s2));
                    }
                }
            }
        }
        out
    }

    /// Witness orientation if the up/down component is coherent.
    ///
    /// Leaf up-components and root down-components are never coherent.
    /// Other components get a spanning-tree sign propagation followed by a
    /// consistency check on every constraint.
    pub fn detect_coherent(&self, component: &[usize], dir: Direction) -> Option<Orientation> {
        if component.is_empty() || self.is_trivial_component(component, dir) {
            return None;
        }
        let cons = self.coherence_constraints(component, dir);
        let mut adj: HashMap<usize, Vec<(usize, i32)>> = HashMap::new();
        for &(a, b, c) in &cons {
            adj.entry(a).or_default().push((b, c));
            adj.entry(b).or_default().push((a, c));
        }
        let mut sign: HashMap<usize, i32> = HashMap::new();
        for &start in component {
            if sign.contains_key(&start) {
                continue;
            }
            sign.insert(start, 1);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(w, c) in adj.get(&u).map_or(&[][..], Vec::as_slice) {
                    let su = sign[&u];
                    if let std::collections::hash_map::Entry::Vacant(e) = sign.entry(w) {
                        e.insert(su * c);
                        queue.push_back(w);
                    }
                }
            }
        }
        if cons.iter().any(|&(a, b, c)| sign[&a] * sign[&b] != c) {
            return None;
        }
        let mut o = Orientation::reference(self.len());
        for &u in component {
            o.flips[u] = sign[&u] < 0;
        }
        Some(o)
    }

    /// Whether `o` makes all shared-coface (up) or shared-face (down) signs equal on the component.
    pub fn is_coherent_under(&self, component: &[usize], dir: Direction, o: &Orientation) -> bool {
        self.coherence_constraints(component, dir)
            .iter()
            .all(|&(a, b, c)| o.sign(a) * o.sign(b) == c)
    }
}

pub fn cover_from_complex(complex: &SimplicialComplex) -> Cover {
    let names = (0..complex.len()).map(|i| complex.face_name(i)).collect();
    let dims = complex.faces().iter().map(|f| f.dim()).collect();
    let mut edges = Vec::new();
    for p in 0..complex.len() {
        for (c, s) in complex.boundary(p) {
            edges.push((c, p, s));
        }
    }
    Cover::build(names, dims, edges).expect("boundary pairs always increase dimension by one")
}

pub fn parse_cover_spec(text: &str) -> Result<Cover> {
    let mut names: Vec<String> = Vec::new();
    let mut dims = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["node", id, dim] => {
                let d: usize = dim.parse().map_err(|_| err(no + 1, format!("bad dimension {dim:?}")))?;
                if ids.contains_key(*id) {
                    return Err(err(no + 1, format!("node {id:?} defined twice")));
                }
                ids.insert(id.to_string(), names.len());
                names.push(id.to_string());
                dims.push(d);
            }
            ["edge", child, parent, sign] => {
                let c = *ids.get(*child).ok_or_else(|| err(no + 1, format!("unknown node {child:?}")))?;
                let p = *ids.get(*parent).ok_or_else(|| err(no + 1, format!("unknown node {parent:?}")))?;
                let s = match *sign {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    _ => return Err(err(no + 1, format!("sign must be +1 or -1, got {sign:?}"))),
                };
                if dims[c] >= dims[p] {
                    return Err(err(no + 1, format!("edge {child} -> {parent} does not increase dimension")));
                }
                edges.push((c, p, s));
            }
            _ => return Err(err(no + 1, format!("unrecognised line {line:?}"))),
        }
    }
    if names.is_empty() {
        return Err(err(0, "no nodes".into()));
    }
    Cover::build(names, dims, edges).map_err(|e| err(0, e.to_string()))
}

/// Search for a (k+1)-partition of the vertices of a down-component of k-faces:
/// classes `V_0..V_k` such that every face meets each class exactly once.
pub fn find_partition(complex: &SimplicialComplex, component: &[usize]) -> Option<Vec<Vec<usize>>> {
    let k = complex.face(*component.first()?).dim();
    let mut verts: Vec<usize> = component.iter().flat_map(|&f| complex.face(f).vertices.clone()).collect();
    verts.sort();
    verts.dedup();
    let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Faces whose largest vertex (in search order) is v are checked once v is assigned.
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); verts.len()];
    for &f in component {
        let local: Vec<usize> = complex.face(f).vertices.iter().map(|v| pos[v]).collect();
        let last = *local.iter().max().unwrap();
        closing[last].push(local);
    }
    let mut class = vec![usize::MAX; verts.len()];
    fn go(i: usize, k: usize, class: &mut Vec<usize>, closing: &[Vec<Vec<usize>>]) -> bool {
        if i == class.len() {
            return true;
        }
        for c in 0..=k {
            class[i] = c;
            let ok = closing[i].iter().all(|face| {
                let mut seen = vec![false; k + 1];
                face.iter().all(|&v| !std::mem::replace(&mut seen[class[v]], true))
            });
            if ok && go(i + 1, k, class, closing) {
                return true;
            }
        }
        class[i] = usize::MAX;
        false
    }
    if !go(0, k, &mut class, &closing) {
        return None;
    }
    let mut parts = vec![Vec::new(); k + 1];
    for (i, &c) in class.iter().enumerate() {
        parts[c].push(verts[i]);
    }
    Some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::parse_complex;

    #[test]
    fn cover_spec_parsing() {
        let c = parse_cover_spec("node a 0\nnode b 1\nedge a b +1\n").unwrap();
        assert!(c.is_strong());
        assert_eq!(c.len(), 2);
        let skip = parse_cover_spec("node a 0\nnode b 2\nedge a b -1\n").unwrap();
        assert!(!skip.is_strong());
        assert!(parse_cover_spec("node a 1\nnode b 1\nedge a b +1\n").is_err());
        assert!(parse_cover_spec("node a 0\nedge a z +1\n").is_err());
        assert!(parse_cover_spec("node a 0\nnode b 1\nedge a b 2\n").is_err());
        assert!(skip.components(ComponentKind::QuotientUp, Some(0)).is_err());
    }

    #[test]
    fn tetrahedron_cover_counts() {
        let cx = parse_complex("x0 x1 x2 x3").unwrap();
        let c = cover_from_complex(&cx);
        assert_eq!(c.len(), 15);
        assert_eq!(c.edges().len(), 28);
        assert!(c.is_strong());
        let (leaves, roots) = c.leaves_and_roots();
        assert_eq!(leaves, vec![14]);
        assert_eq!(roots, vec![0, 1, 2, 3]);
    }

    #[test]
    fn compatibility_rules() {
        let cx = parse_complex("x0 x1").unwrap();
        let c = cover_from_complex(&cx);
        let (child, parent, s) = c.edges()[0];
        let v = CoverNode { quotient_index: parent, flipped: false };
        let u = CoverNode { quotient_index: child, flipped: false };
        assert_eq!(c.cover_sign(v, u), Some(s));
        assert_eq!(c.cover_sign(v.neg(), u), Some(-s));
        assert_eq!(c.cover_sign(v, u.neg()), Some(-s));
        assert_eq!(c.cover_sign(v.neg(), u.neg()), Some(s));
    }

    #[test]
    fn single_vertex_is_isolated() {
        let c = cover_from_complex(&parse_complex("x0").unwrap());
        assert!(c.is_leaf(0) && c.is_root(0));
        let comps = c.components(ComponentKind::Cover, None).unwrap();
        assert_eq!(comps.members, vec![vec![0, 1]]);
    }
}
