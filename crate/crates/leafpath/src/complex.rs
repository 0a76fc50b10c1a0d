//! Simplicial complexes, oriented faces, incidence signs and boundary matrices.

use std::collections::{BTreeSet, HashMap};

use crate::error::{pre, Error, Result};
use crate::exact::int;
use crate::matrix::RatMatrix;
use crate::Direction;

/// A face as the sorted list of its vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedFace {
    pub face: Face,
    pub flipped: bool,
}

impl OrientedFace {
    pub fn canonical(face: Face) -> Self {
        OrientedFace { face, flipped: false }
    }

    /// Orientation class of an arbitrary vertex ordering: the parity of the
    /// permutation that sorts it.
    pub fn from_sequence(seq: &[usize]) -> Self {
        let mut v = seq.to_vec();
        let mut swaps = 0;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        OrientedFace { face: Face { vertices: v }, flipped: swaps % 2 == 1 }
    }

    pub fn neg(&self) -> Self {
        OrientedFace { face: self.face.clone(), flipped: !self.flipped }
    }
}

/// `[tau : sigma]` for oriented faces. Removing the vertex at ascending
/// position `i` of `tau` contributes `(-1)^i`, so `[x0,x1]:[x1] = +1`.
pub fn incidence_sign(tau: &OrientedFace, sigma: &OrientedFace) -> Result<i32> {
    let t = &tau.face.vertices;
    let s = &sigma.face.vertices;
    if t.len() != s.len() + 1 {
        return pre("sigma is not a boundary subface of tau");
    }
    let Some(pos) = (0..t.len()).find(|&i| {
        let mut rest = t.clone();
        rest.remove(i);
        &rest == s
    }) else {
        return pre("sigma is not a boundary subface of tau");
    };
    let mut sign = if pos % 2 == 0 { 1 } else { -1 };
    if tau.flipped {
        sign = -sign;
    }
    if sigma.flipped {
        sign = -sign;
    }
    Ok(sign)
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    faces: Vec<Face>,
    by_dim: Vec<Vec<usize>>,
    index: HashMap<Face, usize>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_control() && !c.is_whitespace() && !"#,;{}[]()".contains(c))
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut lines: Vec<Vec<String>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut seen = BTreeSet::new();
        let mut face = Vec::new();
        for tok in line.split_whitespace() {
            if !valid_label(tok) {
                return Err(Error::Parse { line: no + 1, msg: format!("malformed label {tok:?}") });
            }
            if !seen.insert(tok) {
                return Err(Error::Parse { line: no + 1, msg: format!("duplicate vertex {tok:?}") });
            }
            face.push(tok.to_string());
        }
        lines.push(face);
    }
    if lines.is_empty() {
        return Err(Error::Parse { line: 0, msg: "empty face list".into() });
    }
    SimplicialComplex::from_maximal_faces(&lines)
}

impl SimplicialComplex {
    pub fn from_maximal_faces<S: AsRef<str>>(faces: &[Vec<S>]) -> Result<Self> {
        let mut labels: Vec<String> = faces.iter().flatten().map(|s| s.as_ref().to_string()).collect();
        labels.sort();
        labels.dedup();
        let vid: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut all: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for (no, f) in faces.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::Parse { line: no + 1, msg: "empty face".into() });
            }
            let mut v: Vec<usize> = f.iter().map(|s| vid[s.as_ref()]).collect();
            v.sort();
            v.dedup();
            if v.len() != f.len() {
                return Err(Error::Parse { line: no + 1, msg: "duplicate vertex".into() });
            }
            if v.len() > 20 {
                return Err(Error::Guard(format!("face with {} vertices is too large to close", v.len())));
            }
            for mask in 1u32..(1 << v.len()) {
                let sub: Vec<usize> = (0..v.len()).filter(|&i| mask >> i & 1 == 1).map(|i| v[i]).collect();
                all.insert((sub.len() - 1, sub));
            }
        }
        let faces: Vec<Face> = all.into_iter().map(|(_, vertices)| Face { vertices }).collect();
        let top = faces.last().map_or(0, Face::dim);
        let mut by_dim = vec![Vec::new(); top + 1];
        for (i, f) in faces.iter().enumerate() {
            by_dim[f.dim()].push(i);
        }
        let index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(SimplicialComplex { labels, faces, by_dim, index })
    }

    pub fn dimension(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    /// Global indices of the k-faces (empty when k is out of range).
    pub fn faces_of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn find(&self, vertices: &[usize]) -> Option<usize> {
        let mut v = vertices.to_vec();
        v.sort();
        self.index.get(&Face { vertices: v }).copied()
    }

    pub fn find_labels(&self, labels: &[&str]) -> Option<usize> {
        let v: Option<Vec<usize>> = labels.iter().map(|l| self.labels.iter().position(|x| x == l)).collect();
        self.find(&v?)
    }

    pub fn face_name(&self, i: usize) -> String {
        let names: Vec<&str> = self.faces[i].vertices.iter().map(|&v| self.labels[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Boundary subfaces of face `i` with their reference incidence signs.
    pub fn boundary(&self, i: usize) -> Vec<(usize, i32)> {
        let v = &self.faces[i].vertices;
        if v.len() == 1 {
            return Vec::new();
        }
        (0..v.len())
            .map(|p| {
                let mut rest = v.clone();
                rest.remove(p);
                let j = self.index[&Face { vertices: rest }];
                (j, if p % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// Faces of dimension one higher containing face `i`.
    pub fn cofaces(&self, i: usize) -> Vec<usize> {
        let k = self.faces[i].dim();
        self.faces_of_dim(k + 1)
            .iter()
            .copied()
            .filter(|&t| is_subset(&self.faces[i].vertices, &self.faces[t].vertices))
            .collect()
    }

    /// The (N_{k-1} x N_k) integer boundary matrix in the reference orientation.
    /// For k = 0 this is the 0 x N_0 zero map.
    pub fn boundary_matrix(&self, k: usize) -> Result<RatMatrix> {
        if k > self.dimension() {
            return pre(format!("k = {k} exceeds dimension {}", self.dimension()));
        }
        let cols = self.faces_of_dim(k);
        if k == 0 {
            return Ok(RatMatrix::zeros(0, cols.len()));
        }
        let rows = self.faces_of_dim(k - 1);
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut m = RatMatrix::zeros(rows.len(), cols.len());
        for (c, &f) in cols.iter().enumerate() {
            for (b, s) in self.boundary(f) {
                m[(pos[&b], c)] = int(s as i64);
            }
        }
        Ok(m)
    }

    /// Up/down adjacency among k-faces, keyed by global face index.
    pub fn adjacency(&self, k: usize, direction: Direction) -> Result<Vec<(usize, Vec<usize>)>> {
        if k > self.dimension() {
            return pre(format!("k = {k} exceeds dimension {}", self.dimension()));
        }
        let ks = self.faces_of_dim(k);
        Ok(ks
            .iter()
            .map(|&a| {
                let nbrs = ks
                    .iter()
                    .copied()
                    .filter(|&b| b != a)
                    .filter(|&b| {
                        let fa = &self.faces[a].vertices;
                        let fb = &self.faces[b].vertices;
                        match direction {
                            Direction::Up => {
                                let mut u: Vec<usize> = fa.iter().chain(fb).copied().collect();
                                u.sort();
                                u.dedup();
                                u.len() == k + 2 && self.find(&u).is_some()
                            }
                            Direction::Down => fa.iter().filter(|x| fb.contains(x)).count() == k,
                        }
                    })
                    .collect();
                (a, nbrs)
            })
            .collect())
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}
