//! Exhaustive ground truth for small instances.
//!
//! Everything here works from the definitions: all homomorphisms are
//! enumerated, the Hom-graph is built arc by arc, and components, cyclicity
//! and edge refinements are read off the explicit graph.

use std::collections::HashMap;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::OracleError;
use crate::hom::{edge_allowed, has_hom_arc, motion_class, validate_hom, ArcDirection, CycleHom, MotionClass};
use crate::orientation::{OrientationString, OrientationSymbol};

/// Default bound on partial assignments visited by [`enumerate_homs`].
pub const DEFAULT_CAP: usize = 5_000_000;

/// All homomorphisms `source -> target` in lexicographic order of images.
///
/// Backtracks over `c_0, c_1, ...`, extending only along arcs allowed by the
/// edge rule. Fails once more than `cap` partial assignments were visited.
pub fn enumerate_homs(
    source: &OrientationString,
    target: &OrientationString,
    cap: usize,
) -> Result<Vec<CycleHom>, OracleError> {
    validate_hom(source, target, vec![0; source.len()])?;
    let (m, n) = (source.len(), target.len());
    let x = source.symbols();
    let mut found = Vec::new();
    let mut images = vec![0usize; m];
    let mut visited = 0usize;

    fn extend(
        j: usize,
        x: &[OrientationSymbol],
        target: &OrientationString,
        images: &mut Vec<usize>,
        visited: &mut usize,
        cap: usize,
        found: &mut Vec<Vec<usize>>,
    ) -> Result<(), OracleError> {
        let (m, n) = (images.len(), target.len());
        if j == m {
            if edge_allowed(target, x[m - 1], images[m - 1], images[0]) {
                found.push(images.clone());
            }
            return Ok(());
        }
        let prev = images[j - 1];
        let mut candidates = [(prev + n - 1) % n, prev, (prev + 1) % n];
        candidates.sort_unstable();
        for v in candidates {
            if !edge_allowed(target, x[j - 1], prev, v) {
                continue;
            }
            *visited += 1;
            if *visited > cap {
                return Err(OracleError::CapExceeded { cap });
            }
            images[j] = v;
            extend(j + 1, x, target, images, visited, cap, found)?;
        }
        Ok(())
    }

    let mut raw = Vec::new();
    for v0 in 0..n {
        visited += 1;
        if visited > cap {
            return Err(OracleError::CapExceeded { cap });
        }
        images[0] = v0;
        extend(1, x, target, &mut images, &mut visited, cap, &mut raw)?;
    }
    raw.sort_unstable();
    raw.dedup();
    for images in raw {
        found.push(CycleHom::from_parts(source.clone(), target.clone(), images));
    }
    Ok(found)
}

enum HomIndex {
    Dense { n: usize, slots: Vec<u32> },
    Sparse(HashMap<Vec<usize>, usize>),
}

impl HomIndex {
    const DENSE_LIMIT: usize = 1 << 22;

    fn new(homs: &[CycleHom]) -> Self {
        let Some(first) = homs.first() else {
            return Self::Sparse(HashMap::new());
        };
        let (m, n) = (first.images().len(), first.target().len());
        let size = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&s| s <= Self::DENSE_LIMIT));
        match size {
            Some(size) => {
                let mut slots = vec![u32::MAX; size];
                for (i, h) in homs.iter().enumerate() {
                    slots[Self::code(h.images(), n)] = i as u32;
                }
                Self::Dense { n, slots }
            }
            None => Self::Sparse(homs.iter().enumerate().map(|(i, h)| (h.images().to_vec(), i)).collect()),
        }
    }

    fn code(images: &[usize], n: usize) -> usize {
        images.iter().fold(0, |acc, &v| acc * n + v)
    }

    fn get(&self, images: &[usize]) -> Option<usize> {
        match self {
            Self::Dense { n, slots } => {
                let slot = slots[Self::code(images, *n)];
                (slot != u32::MAX).then_some(slot as usize)
            }
            Self::Sparse(map) => map.get(images).copied(),
        }
    }
}

/// The Hom-graph on an explicit list of maps of one instance.
///
/// Every map carries a loop (the target is reflexive); loops are not stored.
pub struct HomGraph {
    homs: Vec<CycleHom>,
    index: HomIndex,
    /// `out[i]`: sorted `j != i` with `homs[i] -> homs[j]`.
    out: Vec<Vec<usize>>,
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
}

/// Builds the Hom-graph on `homs`, which must all share one instance.
///
/// Arcs out of a map only reach maps differing by at most one step per vertex
/// (the source is reflexive), so candidates are generated by backtracking
/// over per-vertex displacements and looked up, instead of testing all pairs.
pub fn build_hom_graph(homs: Vec<CycleHom>) -> HomGraph {
    if let Some(first) = homs.first() {
        assert!(homs.iter().all(|h| h.same_instance(first)), "maps of one instance");
    }
    let index = HomIndex::new(&homs);
    let out: Vec<Vec<usize>> = homs
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let mut targets = Vec::new();
            let mut images = vec![0usize; h.images().len()];
            arc_candidates(h, 0, &mut images, &mut |cand| {
                if let Some(j) = index.get(cand) {
                    if j != i {
                        targets.push(j);
                    }
                }
            });
            targets.sort_unstable();
            targets
        })
        .collect();

    let mut uf = UnionFind::<usize>::new(homs.len());
    for (i, targets) in out.iter().enumerate() {
        for &j in targets {
            uf.union(i, j);
        }
    }
    let mut component_of = vec![usize::MAX; homs.len()];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut label_of_root = HashMap::new();
    for i in 0..homs.len() {
        let root = uf.find(i);
        let label = *label_of_root.entry(root).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        component_of[i] = label;
        components[label].push(i);
    }
    HomGraph {
        homs,
        index,
        out,
        component_of,
        components,
    }
}

/// Calls `emit` on every image vector `b` with `h -> b` that is a homomorphism.
fn arc_candidates(h: &CycleHom, j: usize, b: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    let target = h.target();
    let x = h.source().symbols();
    let a = h.images();
    let (m, n) = (a.len(), target.len());
    // arcs of the source between c_u and c_v (v = u + 1), mapped a on the tail side and b on the head
    let cross_ok = |sym: OrientationSymbol, u: usize, v: usize, b: &[usize]| match sym {
        OrientationSymbol::Forward => target.has_arc(a[u], b[v]),
        OrientationSymbol::Backward => target.has_arc(a[v], b[u]),
        OrientationSymbol::Symmetric => target.has_arc(a[u], b[v]) && target.has_arc(a[v], b[u]),
    };
    if j == m {
        if edge_allowed(target, x[m - 1], b[m - 1], b[0]) && cross_ok(x[m - 1], m - 1, 0, b) {
            emit(b);
        }
        return;
    }
    for v in [a[j], (a[j] + 1) % n, (a[j] + n - 1) % n] {
        if !target.has_arc(a[j], v) {
            continue;
        }
        b[j] = v;
        if j > 0 && !(edge_allowed(target, x[j - 1], b[j - 1], v) && cross_ok(x[j - 1], j - 1, j, b)) {
            continue;
        }
        arc_candidates(h, j + 1, b, emit);
    }
}

impl HomGraph {
    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    pub fn homs(&self) -> &[CycleHom] {
        &self.homs
    }

    pub fn hom(&self, i: usize) -> &CycleHom {
        &self.homs[i]
    }

    pub fn index_of(&self, images: &[usize]) -> Option<usize> {
        if self.homs.first().is_some_and(|h| h.images().len() != images.len()) {
            return None;
        }
        self.index.get(images)
    }

    /// Non-loop arcs out of `i`.
    pub fn out_arcs(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        i == j || self.out[i].binary_search(&j).is_ok()
    }

    pub fn arc_direction(&self, i: usize, j: usize) -> ArcDirection {
        ArcDirection::from_flags(self.has_arc(i, j), self.has_arc(j, i))
    }

    /// Each edge once, as `(i, j, direction)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, ArcDirection)> {
        // arcs j -> i with i < j, listed under i in increasing j
        let mut back: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (j, targets) in self.out.iter().enumerate() {
            for &i in targets.iter().take_while(|&&i| i < j) {
                back[i].push(j);
            }
        }
        let mut edges = Vec::new();
        for (i, targets) in self.out.iter().enumerate() {
            let mut fwd = targets[targets.partition_point(|&j| j <= i)..].iter().copied().peekable();
            let mut bwd = back[i].iter().copied().peekable();
            loop {
                let (j, forward, backward) = match (fwd.peek(), bwd.peek()) {
                    (None, None) => break,
                    (Some(&f), Some(&b)) if f == b => (f, true, true),
                    (Some(&f), Some(&b)) if f < b => (f, true, false),
                    (Some(&f), None) => (f, true, false),
                    (_, Some(&b)) => (b, false, true),
                };
                if forward {
                    fwd.next();
                }
                if backward {
                    bwd.next();
                }
                edges.push((i, j, ArcDirection::from_flags(forward, backward)));
            }
        }
        edges
    }

    /// Components of the underlying undirected graph, numbered by smallest member.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.component_of[i]
    }

    pub fn same_component(&self, i: usize, j: usize) -> bool {
        self.component_of[i] == self.component_of[j]
    }

    /// Up edges as arcs `lower -> higher`: every moving vertex moves up along them.
    pub fn up_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter_map(|(i, j, _)| match motion_class(&self.homs[i], &self.homs[j]) {
                Some(MotionClass::Up) => Some((i, j)),
                Some(MotionClass::Down) => Some((j, i)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub id: usize,
    /// `None` when the component mixes winds (only possible for contractible targets).
    pub wind: Option<i64>,
    pub size: usize,
    pub cyclic: bool,
    pub up_edges: usize,
    pub members: Vec<usize>,
}

/// Wind, size and cyclicity of every component, ordered by component id.
///
/// A component is cyclic when its up edges form a strongly connected digraph
/// on all its members and there is at least one up edge.
pub fn component_analysis(g: &HomGraph) -> Vec<ComponentSummary> {
    let up = g.up_edges();
    let mut digraph = DiGraph::<(), ()>::with_capacity(g.len(), up.len());
    let nodes: Vec<NodeIndex> = (0..g.len()).map(|_| digraph.add_node(())).collect();
    let mut up_count = vec![0usize; g.components().len()];
    for &(a, b) in &up {
        digraph.add_edge(nodes[a], nodes[b], ());
        up_count[g.component_of(a)] += 1;
    }
    let mut scc_of = vec![0usize; g.len()];
    for (k, scc) in tarjan_scc(&digraph).into_iter().enumerate() {
        for v in scc {
            scc_of[v.index()] = k;
        }
    }
    g.components()
        .iter()
        .enumerate()
        .map(|(id, members)| {
            let first_wind = g.hom(members[0]).wind();
            let wind = members.iter().all(|&i| g.hom(i).wind() == first_wind).then_some(first_wind);
            let one_scc = members.iter().all(|&i| scc_of[i] == scc_of[members[0]]);
            ComponentSummary {
                id,
                wind,
                size: members.len(),
                cyclic: one_scc && up_count[id] > 0,
                up_edges: up_count[id],
                members: members.clone(),
            }
        })
        .collect()
}

/// For an arc `phi -> psi`: the constraint digraph on the vertices that move.
///
/// `u -> v` means any refinement moving `u` must also move `v`: there is a
/// source arc `u -> v` with `psi(u) -/-> phi(v)` in the target. For a
/// terminal strong component `T`, the map agreeing with `psi` on `T` and with
/// `phi` elsewhere is a homomorphism lying on a path `phi -> . -> psi`.
#[derive(Clone, Debug)]
pub struct AuxiliaryDigraph {
    /// Source vertices that move, in increasing order.
    moved: Vec<usize>,
    /// Adjacency over positions in `moved`.
    arcs: Vec<Vec<usize>>,
}

impl AuxiliaryDigraph {
    /// Requires `phi -> psi`.
    pub fn new(phi: &CycleHom, psi: &CycleHom) -> Self {
        debug_assert!(has_hom_arc(phi, psi));
        let (a, b) = (phi.images(), psi.images());
        let target = phi.target();
        let m = a.len();
        let moved: Vec<usize> = (0..m).filter(|&v| a[v] != b[v]).collect();
        let mut pos = vec![usize::MAX; m];
        for (k, &v) in moved.iter().enumerate() {
            pos[v] = k;
        }
        let mut arcs = vec![Vec::new(); moved.len()];
        let mut constrain = |u: usize, v: usize| {
            if pos[u] != usize::MAX && pos[v] != usize::MAX && u != v && !target.has_arc(b[u], a[v]) {
                arcs[pos[u]].push(pos[v]);
            }
        };
        for (k, x) in phi.source().iter().enumerate() {
            let (u, v) = (k, (k + 1) % m);
            if x.has_forward_arc() {
                constrain(u, v);
            }
            if x.has_backward_arc() {
                constrain(v, u);
            }
        }
        for list in &mut arcs {
            list.sort_unstable();
            list.dedup();
        }
        Self { moved, arcs }
    }

    pub fn moved(&self) -> &[usize] {
        &self.moved
    }

    /// Arcs as pairs of source vertices.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .enumerate()
            .flat_map(|(k, list)| list.iter().map(move |&l| (self.moved[k], self.moved[l])))
            .collect()
    }

    fn reach(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.moved.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.arcs[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        let k = self.moved.len();
        k <= 1 || (0..k).all(|u| self.reach(u).iter().all(|&r| r))
    }

    /// The terminal strong component containing the smallest possible source
    /// vertex, as source vertices. Empty when nothing moves.
    pub fn terminal_component(&self) -> Vec<usize> {
        let k = self.moved.len();
        let reach: Vec<Vec<bool>> = (0..k).map(|u| self.reach(u)).collect();
        for u in 0..k {
            let scc: Vec<usize> = (0..k).filter(|&v| reach[u][v] && reach[v][u]).collect();
            let closed = (0..k).all(|v| !reach[u][v] || scc.contains(&v));
            if closed {
                return scc.into_iter().map(|v| self.moved[v]).collect();
            }
        }
        Vec::new()
    }
}

/// The map equal to `psi` on `subset` and to `phi` elsewhere (not validated).
fn splice(phi: &CycleHom, psi: &CycleHom, subset: &[usize]) -> Vec<usize> {
    let mut images = phi.images().to_vec();
    for &v in subset {
        images[v] = psi.images()[v];
    }
    images
}

/// No map strictly between `h` and `h2` agrees with one of them on every vertex.
pub fn is_non_refinable(h: &CycleHom, h2: &CycleHom) -> Result<bool, OracleError> {
    if !h.same_instance(h2) {
        return Err(crate::error::HomError::InstanceMismatch.into());
    }
    let (phi, psi) = if has_hom_arc(h, h2) {
        (h, h2)
    } else if has_hom_arc(h2, h) {
        (h2, h)
    } else {
        return Err(OracleError::NotAdjacent);
    };
    if phi.images().len() <= 64 {
        return Ok(moved_set_is_strong(phi, psi));
    }
    Ok(AuxiliaryDigraph::new(phi, psi).is_strongly_connected())
}

/// Strong connectivity of the auxiliary digraph of `phi -> psi`, on bit sets.
fn moved_set_is_strong(phi: &CycleHom, psi: &CycleHom) -> bool {
    let (a, b) = (phi.images(), psi.images());
    let target = phi.target();
    let m = a.len();
    let moved = (0..m).filter(|&v| a[v] != b[v]).fold(0u64, |set, v| set | 1 << v);
    if moved.count_ones() <= 1 {
        return true;
    }
    let (mut out, mut inc) = ([0u64; 64], [0u64; 64]);
    let mut constrain = |u: usize, v: usize| {
        if u != v && moved >> u & 1 == 1 && moved >> v & 1 == 1 && !target.has_arc(b[u], a[v]) {
            out[u] |= 1 << v;
            inc[v] |= 1 << u;
        }
    };
    for (k, x) in phi.source().iter().enumerate() {
        let (u, v) = (k, (k + 1) % m);
        if x.has_forward_arc() {
            constrain(u, v);
        }
        if x.has_backward_arc() {
            constrain(v, u);
        }
    }
    let reach = |arcs: &[u64; 64]| {
        let mut seen = moved & moved.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = arcs[u] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    };
    reach(&out) == moved && reach(&inc) == moved
}

/// Splits a Hom-graph edge into a path of non-refinable edges.
///
/// Returns `[h]` when the maps coincide and `[h, h2]` when the edge is
/// already non-refinable.
pub fn refine_edge(h: &CycleHom, h2: &CycleHom) -> Result<Vec<CycleHom>, OracleError> {
    if !h.same_instance(h2) {
        return Err(crate::error::HomError::InstanceMismatch.into());
    }
    if h == h2 {
        return Ok(vec![h.clone()]);
    }
    if has_hom_arc(h, h2) {
        Ok(refine_arc(h, h2))
    } else if has_hom_arc(h2, h) {
        let mut path = refine_arc(h2, h);
        path.reverse();
        Ok(path)
    } else {
        Err(OracleError::NotAdjacent)
    }
}

fn refine_arc(phi: &CycleHom, psi: &CycleHom) -> Vec<CycleHom> {
    let aux = AuxiliaryDigraph::new(phi, psi);
    if aux.is_strongly_connected() {
        return vec![phi.clone(), psi.clone()];
    }
    let terminal = aux.terminal_component();
    let mid = validate_hom(phi.source(), phi.target(), splice(phi, psi, &terminal))
        .expect("a terminal component splices to a homomorphism");
    debug_assert!(has_hom_arc(phi, &mid) && has_hom_arc(&mid, psi));
    let mut path = refine_arc(phi, &mid);
    path.pop();
    path.extend(refine_arc(&mid, psi));
    path
}

/// Whether `h2` is `h` with one stationary run lifted by one level.
pub fn is_one_step_lift(h: &CycleHom, h2: &CycleHom) -> bool {
    if motion_class(h, h2) != Some(MotionClass::Up) {
        return false;
    }
    let m = h.images().len();
    let moved: Vec<bool> = (0..m).map(|v| h.images()[v] != h2.images()[v]).collect();
    let starts = (0..m).filter(|&v| moved[v] && !moved[(v + m - 1) % m]).count();
    let all = moved.iter().all(|&b| b);
    let level = (0..m).find(|&v| moved[v]).map(|v| h.images()[v]);
    let same_level = (0..m).all(|v| !moved[v] || Some(h.images()[v]) == level);
    (starts == 1 || all) && same_level
}

#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    /// Group each component into a `cluster_*` subgraph.
    pub cluster_components: bool,
    /// Draw the loop every map carries.
    pub include_loops: bool,
}

/// Deterministic Graphviz rendering. Up edges are drawn bold blue, oriented
/// by their arcs; symmetric pairs use `dir=both`.
pub fn export_dot(g: &HomGraph, options: &DotOptions) -> String {
    if g.is_empty() {
        return "digraph hom {}\n".to_string();
    }
    let mut out = String::from("digraph hom {\n  node [shape=box, fontname=\"monospace\"];\n");
    let summaries = component_analysis(g);
    let node = |out: &mut String, indent: &str, i: usize| {
        let _ = writeln!(out, "{indent}n{i} [label=\"{}\"];", g.hom(i));
    };
    if options.cluster_components {
        for c in &summaries {
            let wind = c.wind.map_or_else(|| "mixed".to_string(), |w| w.to_string());
            let _ = writeln!(out, "  subgraph cluster_{} {{", c.id);
            let _ = writeln!(
                out,
                "    label=\"component {} (wind {}, {})\";",
                c.id,
                wind,
                if c.cyclic { "cyclic" } else { "non-cyclic" }
            );
            for &i in &c.members {
                node(&mut out, "    ", i);
            }
            out.push_str("  }\n");
        }
    } else {
        for i in 0..g.len() {
            node(&mut out, "  ", i);
        }
    }
    for (i, j, dir) in g.edges() {
        let up = matches!(
            motion_class(g.hom(i), g.hom(j)),
            Some(MotionClass::Up | MotionClass::Down)
        );
        let style = if up { ", color=blue, penwidth=2" } else { "" };
        let (from, to, both) = match dir {
            ArcDirection::Forward => (i, j, false),
            ArcDirection::Backward => (j, i, false),
            ArcDirection::Both => (i, j, true),
            ArcDirection::None => continue,
        };
        let dir_attr = if both { "dir=both" } else { "dir=forward" };
        let _ = writeln!(out, "  n{from} -> n{to} [{dir_attr}{style}];");
    }
    if options.include_loops {
        for i in 0..g.len() {
            let _ = writeln!(out, "  n{i} -> n{i};");
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentJson {
    pub id: usize,
    pub wind: Option<i64>,
    pub size: usize,
    pub cyclic: bool,
    pub up_edges: usize,
    pub representative: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub target: OrientationString,
    pub source: OrientationString,
    pub homomorphisms: usize,
    pub edges: usize,
    pub components: Vec<ComponentJson>,
}

pub fn summarize(source: &OrientationString, target: &OrientationString, g: &HomGraph) -> OracleSummary {
    OracleSummary {
        target: target.clone(),
        source: source.clone(),
        homomorphisms: g.len(),
        edges: g.edges().len(),
        components: component_analysis(g)
            .into_iter()
            .map(|c| ComponentJson {
                id: c.id,
                wind: c.wind,
                size: c.size,
                cyclic: c.cyclic,
                up_edges: c.up_edges,
                representative: g.hom(c.members[0]).to_string(),
            })
            .collect(),
    }
}

/// Enumerates and builds the Hom-graph in one go.
pub fn hom_graph(source: &OrientationString, target: &OrientationString, cap: usize) -> Result<HomGraph, OracleError> {
    Ok(build_hom_graph(enumerate_homs(source, target, cap)?))
}
