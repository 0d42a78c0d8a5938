//! Free props as port-ordered directed acyclic graphs.
//!
//! A diagram of bidegree `(n, m)` has `n` global input ports, `m` global
//! output ports, and operation vertices with ordered in/out slots. Every
//! port and every vertex slot carries exactly one edge, so edges form a
//! perfect matching from sources (global inputs, vertex out-slots) to
//! targets (global outputs, vertex in-slots).
//!
//! Equality in the free prop is decided by a deterministic canonical
//! relabeling: ordered ports make DAG isomorphism a single traversal, no
//! general graph-isomorphism search is involved.

use std::collections::BTreeMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::{block_perm, Permutation};
use crate::signature::{Gen, Signature};

/// Edge source: a global input port or a vertex out-slot (all zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Src {
    In(usize),
    V(usize, usize),
}

/// Edge target: a global output port or a vertex in-slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dst {
    Out(usize),
    V(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: Src,
    pub dst: Dst,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    pub n_in: usize,
    pub n_out: usize,
    pub vertices: Vec<Gen>,
    pub edges: Vec<Edge>,
}

/// A diagram in canonical labeling; structural equality decides equality in
/// the free prop.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalDiagram(Diagram);

impl CanonicalDiagram {
    pub fn diagram(&self) -> &Diagram {
        &self.0
    }

    pub fn into_diagram(self) -> Diagram {
        self.0
    }
}

impl Diagram {
    pub fn identity(n: usize) -> Self {
        Self {
            n_in: n,
            n_out: n,
            vertices: Vec::new(),
            edges: (0..n)
                .map(|i| Edge {
                    src: Src::In(i),
                    dst: Dst::Out(i),
                })
                .collect(),
        }
    }

    /// One-vertex diagram of a generator.
    pub fn generator(gen: &Gen) -> Self {
        let mut edges = Vec::with_capacity(gen.n_in + gen.n_out);
        for i in 0..gen.n_in {
            edges.push(Edge {
                src: Src::In(i),
                dst: Dst::V(0, i),
            });
        }
        for j in 0..gen.n_out {
            edges.push(Edge {
                src: Src::V(0, j),
                dst: Dst::Out(j),
            });
        }
        Self {
            n_in: gen.n_in,
            n_out: gen.n_out,
            vertices: vec![gen.clone()],
            edges,
        }
    }

    /// Wire diagram of a permutation: input `i` connects to output
    /// `sigma(i)`.
    pub fn permutation(sigma: &Permutation) -> Self {
        Self {
            n_in: sigma.size(),
            n_out: sigma.size(),
            vertices: Vec::new(),
            edges: (0..sigma.size())
                .map(|i| Edge {
                    src: Src::In(i),
                    dst: Dst::Out(sigma.apply(i)),
                })
                .collect(),
        }
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.n_in, self.n_out)
    }

    /// Structural well-formedness: every source and target used exactly
    /// once, no oriented cycle.
    pub fn validate(&self) -> Result<()> {
        let mut src_seen: BTreeMap<Src, usize> = BTreeMap::new();
        let mut dst_seen: BTreeMap<Dst, usize> = BTreeMap::new();
        for e in &self.edges {
            *src_seen.entry(e.src).or_insert(0) += 1;
            *dst_seen.entry(e.dst).or_insert(0) += 1;
            match e.src {
                Src::In(i) if i >= self.n_in => {
                    return Err(Error::InvalidDiagram(format!("input {i} out of range")));
                }
                Src::V(v, s) => {
                    let g = self.vertices.get(v).ok_or_else(|| {
                        Error::InvalidDiagram(format!("vertex {v} out of range"))
                    })?;
                    if s >= g.n_out {
                        return Err(Error::InvalidDiagram(format!(
                            "out-slot {s} of {} out of range",
                            g.name
                        )));
                    }
                }
                _ => {}
            }
            match e.dst {
                Dst::Out(j) if j >= self.n_out => {
                    return Err(Error::InvalidDiagram(format!("output {j} out of range")));
                }
                Dst::V(v, s) => {
                    let g = self.vertices.get(v).ok_or_else(|| {
                        Error::InvalidDiagram(format!("vertex {v} out of range"))
                    })?;
                    if s >= g.n_in {
                        return Err(Error::InvalidDiagram(format!(
                            "in-slot {s} of {} out of range",
                            g.name
                        )));
                    }
                }
                _ => {}
            }
        }
        for i in 0..self.n_in {
            if src_seen.get(&Src::In(i)) != Some(&1) {
                return Err(Error::InvalidDiagram(format!("input {i} not wired once")));
            }
        }
        for j in 0..self.n_out {
            if dst_seen.get(&Dst::Out(j)) != Some(&1) {
                return Err(Error::InvalidDiagram(format!("output {j} not wired once")));
            }
        }
        for (v, g) in self.vertices.iter().enumerate() {
            for s in 0..g.n_out {
                if src_seen.get(&Src::V(v, s)) != Some(&1) {
                    return Err(Error::InvalidDiagram(format!(
                        "out-slot {s} of vertex {v} not wired once"
                    )));
                }
            }
            for s in 0..g.n_in {
                if dst_seen.get(&Dst::V(v, s)) != Some(&1) {
                    return Err(Error::InvalidDiagram(format!(
                        "in-slot {s} of vertex {v} not wired once"
                    )));
                }
            }
        }
        self.topo_order()?;
        Ok(())
    }

    /// Topological order of vertices (deterministic: smallest index first).
    pub fn topo_order(&self) -> Result<Vec<usize>> {
        let nv = self.vertices.len();
        let mut indeg = vec![0usize; nv];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for e in &self.edges {
            if let (Src::V(u, _), Dst::V(v, _)) = (e.src, e.dst) {
                succ[u].push(v);
                indeg[v] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
        ready.sort_unstable_by(|a, b| b.cmp(a));
        let mut order = Vec::with_capacity(nv);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    let pos = ready.binary_search_by(|x| w.cmp(x)).unwrap_or_else(|p| p);
                    ready.insert(pos, w);
                }
            }
        }
        if order.len() != nv {
            return Err(Error::InvalidDiagram("oriented cycle".into()));
        }
        Ok(order)
    }

    /// Composite "this first, then `g`" (the prop composition `g o self`).
    pub fn compose(&self, g: &Diagram) -> Result<Diagram> {
        if self.n_out != g.n_in {
            return Err(Error::ArityMismatch(format!(
                "compose: {} outputs vs {} inputs",
                self.n_out, g.n_in
            )));
        }
        let shift = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend(g.vertices.iter().cloned());
        // sources feeding self's outputs, targets of g's inputs
        let mut f_out: Vec<Option<Src>> = vec![None; self.n_out];
        for e in &self.edges {
            if let Dst::Out(j) = e.dst {
                f_out[j] = Some(e.src);
            }
        }
        let mut g_in: Vec<Option<Dst>> = vec![None; g.n_in];
        for e in &g.edges {
            if let Src::In(i) = e.src {
                g_in[i] = Some(match e.dst {
                    Dst::Out(j) => Dst::Out(j),
                    Dst::V(v, s) => Dst::V(v + shift, s),
                });
            }
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            if !matches!(e.dst, Dst::Out(_)) {
                edges.push(*e);
            }
        }
        for e in &g.edges {
            if matches!(e.src, Src::In(_)) {
                continue;
            }
            let src = match e.src {
                Src::V(v, s) => Src::V(v + shift, s),
                s => s,
            };
            let dst = match e.dst {
                Dst::V(v, s) => Dst::V(v + shift, s),
                d => d,
            };
            edges.push(Edge { src, dst });
        }
        for j in 0..self.n_out {
            let src = f_out[j].ok_or_else(|| Error::InvalidDiagram("unwired output".into()))?;
            let dst = g_in[j].ok_or_else(|| Error::InvalidDiagram("unwired input".into()))?;
            edges.push(Edge { src, dst });
        }
        Ok(Diagram {
            n_in: self.n_in,
            n_out: g.n_out,
            vertices,
            edges,
        })
    }

    /// Tensor product: disjoint union with shifted port indices.
    pub fn tensor(&self, g: &Diagram) -> Diagram {
        let shift = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend(g.vertices.iter().cloned());
        let mut edges = self.edges.clone();
        for e in &g.edges {
            let src = match e.src {
                Src::In(i) => Src::In(i + self.n_in),
                Src::V(v, s) => Src::V(v + shift, s),
            };
            let dst = match e.dst {
                Dst::Out(j) => Dst::Out(j + self.n_out),
                Dst::V(v, s) => Dst::V(v + shift, s),
            };
            edges.push(Edge { src, dst });
        }
        Diagram {
            n_in: self.n_in + g.n_in,
            n_out: self.n_out + g.n_out,
            vertices,
            edges,
        }
    }

    /// Canonical relabeling. Traversal starts from the global outputs in
    /// index order, then the global inputs; inside a component, a vertex
    /// explores its in-slot sources then out-slot targets in slot order.
    /// Closed components (no global ports) are canonicalized by minimal
    /// encoding over their possible roots and appended last.
    pub fn canonical_form(&self) -> CanonicalDiagram {
        let nv = self.vertices.len();
        let mut in_of: BTreeMap<(usize, usize), Src> = BTreeMap::new();
        let mut out_of: BTreeMap<(usize, usize), Dst> = BTreeMap::new();
        let mut port_in: Vec<Option<Dst>> = vec![None; self.n_in];
        let mut port_out: Vec<Option<Src>> = vec![None; self.n_out];
        for e in &self.edges {
            if let Dst::V(v, s) = e.dst {
                in_of.insert((v, s), e.src);
            }
            if let Src::V(v, s) = e.src {
                out_of.insert((v, s), e.dst);
            }
            if let Src::In(i) = e.src {
                port_in[i] = Some(e.dst);
            }
            if let Dst::Out(j) = e.dst {
                port_out[j] = Some(e.src);
            }
        }

        let mut pos: Vec<Option<usize>> = vec![None; nv];
        let mut order: Vec<usize> = Vec::with_capacity(nv);
        let explore = |root: usize, pos: &mut Vec<Option<usize>>, order: &mut Vec<usize>| {
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                if pos[v].is_some() {
                    continue;
                }
                pos[v] = Some(order.len());
                order.push(v);
                let g = &self.vertices[v];
                // push neighbors in reverse so in-slots are explored first,
                // each in slot order
                let mut neighbors = Vec::with_capacity(g.n_in + g.n_out);
                for s in 0..g.n_in {
                    if let Some(Src::V(u, _)) = in_of.get(&(v, s)) {
                        neighbors.push(*u);
                    }
                }
                for s in 0..g.n_out {
                    if let Some(Dst::V(u, _)) = out_of.get(&(v, s)) {
                        neighbors.push(*u);
                    }
                }
                for &u in neighbors.iter().rev() {
                    if pos[u].is_none() {
                        stack.push(u);
                    }
                }
            }
        };
        for j in 0..self.n_out {
            if let Some(Src::V(v, _)) = port_out[j] {
                explore(v, &mut pos, &mut order);
            }
        }
        for i in 0..self.n_in {
            if let Some(Dst::V(v, _)) = port_in[i] {
                explore(v, &mut pos, &mut order);
            }
        }

        // closed components: canonical root by minimal relabeled encoding
        if order.len() < nv {
            let mut comps: Vec<Vec<usize>> = Vec::new();
            let mut comp_of: Vec<Option<usize>> = vec![None; nv];
            for v in 0..nv {
                if pos[v].is_some() || comp_of[v].is_some() {
                    continue;
                }
                let id = comps.len();
                let mut stack = vec![v];
                let mut members = Vec::new();
                while let Some(u) = stack.pop() {
                    if comp_of[u].is_some() {
                        continue;
                    }
                    comp_of[u] = Some(id);
                    members.push(u);
                    let g = &self.vertices[u];
                    for s in 0..g.n_in {
                        if let Some(Src::V(w, _)) = in_of.get(&(u, s)) {
                            if comp_of[*w].is_none() {
                                stack.push(*w);
                            }
                        }
                    }
                    for s in 0..g.n_out {
                        if let Some(Dst::V(w, _)) = out_of.get(&(u, s)) {
                            if comp_of[*w].is_none() {
                                stack.push(*w);
                            }
                        }
                    }
                }
                comps.push(members);
            }
            let mut encoded: Vec<(String, Vec<usize>)> = Vec::new();
            for members in &comps {
                let mut best: Option<(String, Vec<usize>)> = None;
                for &root in members {
                    let mut sub_pos: Vec<Option<usize>> = vec![None; nv];
                    let mut sub_order: Vec<usize> = Vec::new();
                    explore(root, &mut sub_pos, &mut sub_order);
                    let enc = encode_component(self, &sub_order, &sub_pos, &in_of, &out_of);
                    if best.as_ref().map(|(b, _)| enc < *b).unwrap_or(true) {
                        best = Some((enc, sub_order));
                    }
                }
                encoded.push(best.unwrap());
            }
            encoded.sort();
            for (_, sub_order) in encoded {
                for v in sub_order {
                    pos[v] = Some(order.len());
                    order.push(v);
                }
            }
        }

        let vertices: Vec<Gen> = order.iter().map(|&v| self.vertices[v].clone()).collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                src: match e.src {
                    Src::V(v, s) => Src::V(pos[v].unwrap(), s),
                    s => s,
                },
                dst: match e.dst {
                    Dst::V(v, s) => Dst::V(pos[v].unwrap(), s),
                    d => d,
                },
            })
            .collect();
        edges.sort_unstable();
        CanonicalDiagram(Diagram {
            n_in: self.n_in,
            n_out: self.n_out,
            vertices,
            edges,
        })
    }
}

fn encode_component(
    d: &Diagram,
    order: &[usize],
    pos: &[Option<usize>],
    in_of: &BTreeMap<(usize, usize), Src>,
    out_of: &BTreeMap<(usize, usize), Dst>,
) -> String {
    let mut parts = Vec::new();
    for &v in order {
        let g = &d.vertices[v];
        let mut s = format!("{}({},{})", g.name, g.n_in, g.n_out);
        for slot in 0..g.n_in {
            if let Some(Src::V(u, us)) = in_of.get(&(v, slot)) {
                s.push_str(&format!("<{}:{}", pos[*u].unwrap(), us));
            }
        }
        for slot in 0..g.n_out {
            if let Some(Dst::V(u, us)) = out_of.get(&(v, slot)) {
                s.push_str(&format!(">{}:{}", pos[*u].unwrap(), us));
            }
        }
        parts.push(s);
    }
    parts.join(";")
}

/// Equality in the free prop: identical canonical forms.
pub fn equals(d1: &Diagram, d2: &Diagram) -> bool {
    d1.bidegree() == d2.bidegree() && d1.canonical_form() == d2.canonical_form()
}

/// Labeled tensor product `x_1^{I_1} ... x_p^{I_p}` of output-only diagrams:
/// the block permutation composed after the plain tensor product.
pub fn labeled_tensor(factors: &[Diagram], partition: &[Vec<usize>]) -> Result<Diagram> {
    if factors.is_empty() {
        return Ok(Diagram::identity(0));
    }
    let sizes: Vec<usize> = factors
        .iter()
        .map(|f| {
            if f.n_in != 0 {
                return Err(Error::ArityMismatch(format!(
                    "labeled tensor factor has {} inputs",
                    f.n_in
                )));
            }
            Ok(f.n_out)
        })
        .collect::<Result<_>>()?;
    let sigma = block_perm(&sizes, partition)?;
    let mut tens = factors[0].clone();
    for f in &factors[1..] {
        tens = tens.tensor(f);
    }
    tens.compose(&Diagram::permutation(&sigma))
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

fn src_to_json(s: &Src) -> (Value, Value) {
    match s {
        Src::In(i) => (json!(format!("in:{}", i + 1)), json!(0)),
        Src::V(v, slot) => (json!(v), json!(slot + 1)),
    }
}

fn dst_to_json(d: &Dst) -> (Value, Value) {
    match d {
        Dst::Out(j) => (json!(format!("out:{}", j + 1)), json!(0)),
        Dst::V(v, slot) => (json!(v), json!(slot + 1)),
    }
}

impl Diagram {
    /// JSON encoding: `{ "in": n, "out": m, "vertices": [names],
    /// "edges": [[src, srcSlot, dst, dstSlot]] }` with ports written
    /// `"in:i"` / `"out:j"` (1-based) and vertices by index.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let (s, ss) = src_to_json(&e.src);
                let (d, ds) = dst_to_json(&e.dst);
                json!([s, ss, d, ds])
            })
            .collect();
        json!({
            "in": self.n_in,
            "out": self.n_out,
            "vertices": self.vertices.iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
            "edges": edges,
        })
    }

    /// Decode from the JSON wire format; arities resolve against the
    /// signature.
    pub fn from_json(v: &Value, sig: &Signature) -> Result<Diagram> {
        let bad = |msg: &str| Error::InvalidDiagram(format!("json: {msg}"));
        let n_in = v["in"].as_u64().ok_or_else(|| bad("missing in"))? as usize;
        let n_out = v["out"].as_u64().ok_or_else(|| bad("missing out"))? as usize;
        let vertices: Vec<Gen> = v["vertices"]
            .as_array()
            .ok_or_else(|| bad("missing vertices"))?
            .iter()
            .map(|name| {
                let name = name.as_str().ok_or_else(|| bad("vertex name"))?;
                Ok(sig.lookup(name)?.clone())
            })
            .collect::<Result<_>>()?;
        let parse_end = |val: &Value, slot: &Value, is_src: bool| -> Result<(usize, usize, bool)> {
            // returns (index, slot, is_port)
            if let Some(s) = val.as_str() {
                let (prefix, idx) = s
                    .split_once(':')
                    .ok_or_else(|| bad("port must be prefix:index"))?;
                let idx: usize = idx.parse().map_err(|_| bad("port index"))?;
                if idx == 0 {
                    return Err(bad("ports are 1-based"));
                }
                let ok = (is_src && prefix == "in") || (!is_src && prefix == "out");
                if !ok {
                    return Err(bad("wrong port prefix"));
                }
                Ok((idx - 1, 0, true))
            } else {
                let v_idx = val.as_u64().ok_or_else(|| bad("vertex index"))? as usize;
                let s = slot.as_u64().ok_or_else(|| bad("slot"))? as usize;
                if s == 0 {
                    return Err(bad("vertex slots are 1-based"));
                }
                Ok((v_idx, s - 1, false))
            }
        };
        let edges: Vec<Edge> = v["edges"]
            .as_array()
            .ok_or_else(|| bad("missing edges"))?
            .iter()
            .map(|e| {
                let arr = e.as_array().ok_or_else(|| bad("edge must be array"))?;
                if arr.len() != 4 {
                    return Err(bad("edge must have 4 fields"));
                }
                let (si, ss, s_port) = parse_end(&arr[0], &arr[1], true)?;
                let (di, ds, d_port) = parse_end(&arr[2], &arr[3], false)?;
                Ok(Edge {
                    src: if s_port { Src::In(si) } else { Src::V(si, ss) },
                    dst: if d_port { Dst::Out(di) } else { Dst::V(di, ds) },
                })
            })
            .collect::<Result<_>>()?;
        let d = Diagram {
            n_in,
            n_out,
            vertices,
            edges,
        };
        d.validate()?;
        Ok(d)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})[", self.n_in, self.n_out)?;
        for (i, g) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", g.name)?;
        }
        write!(f, "]{} edges", self.edges.len())
    }
}

// ---------------------------------------------------------------------------
// Operad-induced components and random sampling
// ---------------------------------------------------------------------------

/// Dimension of the `(n, m)` component of the prop induced by an operad with
/// the given arity dimensions: a sum over set partitions of `n` points into
/// `m` unordered nonempty blocks of the product of the block dimensions.
pub fn operad_component_dim(
    operad_dims: &dyn Fn(usize) -> usize,
    n: usize,
    m: usize,
) -> Result<usize> {
    if n > 12 || m > 12 {
        return Err(Error::CapExceeded(format!("operad component ({n},{m})")));
    }
    if m == 0 {
        return Ok(usize::from(n == 0));
    }
    if n < m {
        return Ok(0);
    }
    // enumerate set partitions into exactly m blocks
    fn rec(
        point: usize,
        n: usize,
        blocks: &mut Vec<Vec<usize>>,
        m: usize,
        dims: &dyn Fn(usize) -> usize,
        acc: &mut usize,
    ) {
        if point == n {
            if blocks.len() == m {
                let mut prod = 1usize;
                for b in blocks.iter() {
                    prod *= dims(b.len());
                }
                *acc += prod;
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(point);
            rec(point + 1, n, blocks, m, dims, acc);
            blocks[i].pop();
        }
        if blocks.len() < m {
            blocks.push(vec![point]);
            rec(point + 1, n, blocks, m, dims, acc);
            blocks.pop();
        }
    }
    let mut acc = 0usize;
    rec(0, n, &mut Vec::new(), m, operad_dims, &mut acc);
    Ok(acc)
}

/// Random well-formed diagram over a signature, built by composing random
/// generator slices and permutations, then reconciling the width to
/// `n_out`.
pub fn random_diagram(
    sig: &Signature,
    n_in: usize,
    n_out: usize,
    steps: usize,
    rng: &mut StdRng,
) -> Result<Diagram> {
    let mut d = Diagram::identity(n_in);
    let mut width = n_in;
    let slice = |g: &Gen, pos: usize, width: usize| -> Diagram {
        let mut s = Diagram::identity(pos);
        s = s.tensor(&Diagram::generator(g));
        s.tensor(&Diagram::identity(width - pos - g.n_in))
    };
    for _ in 0..steps {
        if rng.gen_bool(0.2) && width > 1 {
            // random permutation slice
            let mut word: Vec<usize> = (0..width).collect();
            for i in (1..width).rev() {
                let j = rng.gen_range(0..=i);
                word.swap(i, j);
            }
            let sigma = Permutation::from_one_line(
                &word.iter().map(|&x| x + 1).collect::<Vec<_>>(),
            )?;
            d = d.compose(&Diagram::permutation(&sigma))?;
            continue;
        }
        let candidates: Vec<&Gen> = sig
            .generators
            .iter()
            .filter(|g| g.n_in <= width)
            .collect();
        if candidates.is_empty() {
            break;
        }
        let g = candidates[rng.gen_range(0..candidates.len())];
        let pos = rng.gen_range(0..=width - g.n_in);
        d = d.compose(&slice(g, pos, width))?;
        width = width - g.n_in + g.n_out;
    }
    // reconcile width to n_out
    while width != n_out {
        let need_shrink = width > n_out;
        let pick = sig
            .generators
            .iter()
            .filter(|g| {
                if need_shrink {
                    g.n_in >= 1 && g.n_out < g.n_in && g.n_in <= width
                } else {
                    g.n_in == 0 && g.n_out >= 1 || (g.n_out > g.n_in && g.n_in <= width)
                }
            })
            .min_by_key(|g| (g.n_in as isize - g.n_out as isize).unsigned_abs());
        let Some(g) = pick else {
            return Err(Error::ArityMismatch(format!(
                "cannot reconcile width {width} to {n_out}"
            )));
        };
        let pos = if width >= g.n_in {
            rng.gen_range(0..=width - g.n_in)
        } else {
            0
        };
        d = d.compose(&slice(g, pos, width))?;
        width = width - g.n_in + g.n_out;
    }
    Ok(d)
}
