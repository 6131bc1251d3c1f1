//! Cayley graphs of `Z_n` with respect to a generator set.
//!
//! The unoriented view is the oriented graph over the symmetrized
//! generator set. Distances always refer to the unoriented view; directed
//! walks are measured separately by [`CayleyGraph::oriented_path_length`].

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{gcd, Automorphism, ModRing};

/// Largest modulus a [`CayleyGraph`] accepts.
pub const MAX_MODULUS: u32 = 4096;

const UNREACHABLE: u32 = u32::MAX;

/// A set of nonzero residues, kept sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorSet {
    #[serde(skip)]
    ring: ModRing,
    elements: Vec<u32>,
    symmetric: bool,
}

impl GeneratorSet {
    pub fn new(ring: ModRing, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut reduced: Vec<u32> = elements.into_iter().map(|e| ring.reduce(e)).collect();
        if reduced.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if reduced.contains(&0) {
            return Err(Error::ZeroGenerator);
        }
        reduced.sort_unstable();
        reduced.dedup();
        let symmetric = reduced
            .iter()
            .all(|&s| reduced.binary_search(&ring.neg_raw(s)).is_ok());
        Ok(Self {
            ring,
            elements: reduced,
            symmetric,
        })
    }

    pub fn ring(&self) -> ModRing {
        self.ring
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// `S ∪ −S`.
    pub fn symmetrize(&self) -> GeneratorSet {
        if self.symmetric {
            return self.clone();
        }
        let mut all = self.elements.clone();
        all.extend(self.elements.iter().map(|&s| self.ring.neg_raw(s)));
        all.sort_unstable();
        all.dedup();
        GeneratorSet {
            ring: self.ring,
            elements: all,
            symmetric: true,
        }
    }

    /// Breadth-first closure of `{0}` under `±S` covers all of `Z_n`.
    pub fn is_generating(&self) -> bool {
        let sym = self.symmetrize();
        let n = self.ring.modulus() as usize;
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &s in &sym.elements {
                let u = self.ring.add_raw(v, s);
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == n
    }

    /// Collective gcd criterion, equivalent to [`GeneratorSet::is_generating`].
    pub fn generates_by_gcd(&self) -> bool {
        self.elements
            .iter()
            .fold(u64::from(self.ring.modulus()), |g, &s| gcd(g, u64::from(s)))
            == 1
    }

    /// Checks the hypotheses of the generator-preservation isometry test.
    pub fn require_symmetric_generating(&self) -> Result<()> {
        if !self.symmetric {
            return Err(Error::NotSymmetric(self.elements.clone()));
        }
        if !self.is_generating() {
            return Err(Error::NotGenerating(
                self.elements.clone(),
                self.ring.modulus(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Oriented,
    Unoriented,
}

/// A walk through the graph together with the generator used at each step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    pub vertices: Vec<u32>,
    pub steps: Vec<u32>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug)]
pub struct CayleyGraph {
    generators: GeneratorSet,
    orientation: Orientation,
    /// Edge labels: the generators themselves, or their symmetrization.
    steps: Vec<u32>,
    undirected_steps: Vec<u32>,
    distances: OnceLock<Vec<u32>>,
}

impl CayleyGraph {
    pub fn new(generators: GeneratorSet, orientation: Orientation) -> Result<Self> {
        let n = generators.ring().modulus();
        if n > MAX_MODULUS {
            return Err(Error::ModulusTooLarge {
                n,
                max: MAX_MODULUS,
            });
        }
        let undirected_steps = generators.symmetrize().elements;
        let steps = match orientation {
            Orientation::Oriented => generators.elements.clone(),
            Orientation::Unoriented => undirected_steps.clone(),
        };
        Ok(Self {
            generators,
            orientation,
            steps,
            undirected_steps,
            distances: OnceLock::new(),
        })
    }

    pub fn oriented(generators: GeneratorSet) -> Result<Self> {
        Self::new(generators, Orientation::Oriented)
    }

    pub fn unoriented(generators: GeneratorSet) -> Result<Self> {
        Self::new(generators, Orientation::Unoriented)
    }

    pub fn ring(&self) -> ModRing {
        self.generators.ring()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Labels of the edges leaving each vertex.
    pub fn steps(&self) -> &[u32] {
        &self.steps
    }

    /// The symmetrized generators underlying the metric.
    pub fn metric_generators(&self) -> GeneratorSet {
        self.generators.symmetrize()
    }

    pub fn out_degree(&self) -> usize {
        self.steps.len()
    }

    /// Directed edges `(g, g ⊕ w, w)` in vertex-then-label order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        let ring = self.ring();
        (0..ring.modulus())
            .flat_map(move |g| self.steps.iter().map(move |&w| (g, ring.add_raw(g, w), w)))
    }

    fn bfs(&self, source: u32, steps: &[u32]) -> Vec<u32> {
        let ring = self.ring();
        let mut dist = vec![UNREACHABLE; ring.modulus() as usize];
        dist[source as usize] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v as usize] + 1;
            for &s in steps {
                let u = ring.add_raw(v, s);
                if dist[u as usize] == UNREACHABLE {
                    dist[u as usize] = next;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// All-pairs unoriented distances, row-major, computed on first use.
    fn table(&self) -> &[u32] {
        self.distances.get_or_init(|| {
            let n = self.ring().modulus();
            let mut table = Vec::with_capacity((n as usize) * (n as usize));
            for source in 0..n {
                table.extend(self.bfs(source, &self.undirected_steps));
            }
            table
        })
    }

    /// Fills the distance cache up front so that the graph can be shared.
    pub fn precompute(&self) {
        self.table();
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        let n = self.ring().modulus();
        if v >= n {
            return Err(Error::ResidueOutOfRange { residue: v, n });
        }
        Ok(())
    }

    /// Unoriented graph distance.
    pub fn distance(&self, a: u32, b: u32) -> Result<u32> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let d = match self.distances.get() {
            Some(table) => table[self.index(a, b)],
            None => self.bfs(a, &self.undirected_steps)[b as usize],
        };
        if d == UNREACHABLE {
            return Err(Error::Unreachable { from: a, to: b });
        }
        Ok(d)
    }

    /// Length of the shortest walk along the graph's own edges. Asymmetric
    /// on oriented graphs.
    pub fn oriented_path_length(&self, a: u32, b: u32) -> Result<u32> {
        self.shortest_path(a, b).map(|p| p.len() as u32)
    }

    /// A shortest walk from `a` to `b` along the graph's own edges, taking
    /// the smallest label first when several are optimal.
    pub fn shortest_path(&self, a: u32, b: u32) -> Result<Path> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let ring = self.ring();
        let n = ring.modulus() as usize;
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[a as usize] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &s in &self.steps {
                let u = ring.add_raw(v, s);
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    parent[u as usize] = Some((v, s));
                    queue.push_back(u);
                }
            }
        }
        if !seen[b as usize] {
            return Err(Error::Unreachable { from: a, to: b });
        }
        let mut vertices = vec![b];
        let mut steps = Vec::new();
        let mut cur = b;
        while let Some((prev, s)) = parent[cur as usize] {
            vertices.push(prev);
            steps.push(s);
            cur = prev;
        }
        vertices.reverse();
        steps.reverse();
        Ok(Path { vertices, steps })
    }

    fn index(&self, a: u32, b: u32) -> usize {
        a as usize * self.ring().modulus() as usize + b as usize
    }

    /// Checks `d(x, y) = d(f(x), f(y))` over every pair of vertices.
    pub fn is_isometry_bruteforce(&self, f: impl Fn(u32) -> u32) -> bool {
        let n = self.ring().modulus();
        let image: Vec<u32> = (0..n).map(|x| f(x) % n).collect();
        let table = self.table();
        (0..n).all(|x| {
            (0..n).all(|y| {
                table[self.index(x, y)]
                    == table[self.index(image[x as usize], image[y as usize])]
            })
        })
    }

    /// Graphviz rendering with vertices `0..n` and edges labelled `+w`.
    pub fn export_dot(&self) -> String {
        let n = self.ring().modulus();
        let (kind, arrow) = match self.orientation {
            Orientation::Oriented => ("digraph", "->"),
            Orientation::Unoriented => ("graph", "--"),
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{kind} \"Z_{n} <{}>\" {{",
            self.generators
                .elements()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        for v in 0..n {
            let _ = writeln!(out, "  {v};");
        }
        let mut emitted = std::collections::HashSet::new();
        for (g, h, w) in self.edges() {
            if self.orientation == Orientation::Unoriented && !emitted.insert((g.min(h), g.max(h))) {
                continue;
            }
            let _ = writeln!(out, "  {g} {arrow} {h} [label=\"+{w}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// Whether `f(S) = S`; by the generator-preservation criterion this is
/// equivalent to `f` being an isometry of the unoriented graph. Requires a
/// symmetric generating `S`.
pub fn is_isometry_by_generators(f: Automorphism, generators: &GeneratorSet) -> Result<bool> {
    if f.ring() != generators.ring() {
        return Err(Error::ModulusMismatch {
            left: f.ring().modulus(),
            right: generators.ring().modulus(),
        });
    }
    generators.require_symmetric_generating()?;
    Ok(generators
        .elements()
        .iter()
        .all(|&s| generators.contains(f.apply_raw(s))))
}
