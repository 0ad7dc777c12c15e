//! Construction trees: nodes are linearly presented modules, edges subtract
//! pure Artinian modules from the catalog.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::betti::{koszul_betti, BettiTable};
use crate::catalog::{compatible_candidates, CandidateSpec, CompatibilityOptions};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::pencil::LinearPencil;
use crate::reduction::{sample_reduction, ReductionDiagnostics};
use crate::resolution::minimal_presentation;
use crate::window::GradedModuleWindow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeStatus {
    /// Linearly presented; expanded further unless the depth limit is reached.
    Linear,
    /// `coker ν²` Artinian but the kernel has nonlinear relations: a leaf with a pencil.
    NotLinear,
    /// Linearly presented with no compatible candidate: a leaf.
    NoCandidates,
    /// The operational `coker ν²` test failed: no pencil.
    NuNotArtinian,
    /// No surjective `μ` within the sampling budget.
    SamplingExhausted,
}

impl NodeStatus {
    pub fn has_pencil(self) -> bool {
        matches!(self, NodeStatus::Linear | NodeStatus::NotLinear | NodeStatus::NoCandidates)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    /// Edge from the parent.
    pub edge: Option<CandidateSpec>,
    /// Edge labels from the root.
    pub path: Vec<String>,
    /// `β_{i,m+i}` for `i = 0..=n`, when computed.
    pub strand: Vec<usize>,
    /// Generators and relations of the minimal presentation.
    pub betti: BettiTable,
    /// `(rows, cols, expected rank)` of the linear part.
    pub pencil_shape: Option<(usize, usize, usize)>,
    pub status: NodeStatus,
    pub diagnostics: Option<ReductionDiagnostics>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TreeOptions {
    pub depth: usize,
    pub attempts_per_edge: usize,
    pub seed: u64,
    pub compat: CompatibilityOptions,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions { depth: 1, attempts_per_edge: 4, seed: 0, compat: CompatibilityOptions::default() }
    }
}

pub const TREE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstructionTree<F: Field> {
    pub n: usize,
    pub m: i64,
    pub sheaf_rank: i64,
    pub nodes: Vec<TreeNode>,
    #[serde(skip)]
    pub pencils: Vec<Option<LinearPencil<F>>>,
}

fn mix(seed: u64, text: &str) -> u64 {
    // FNV-1a over the text, folded with the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn strand_of<F: Field>(w: &GradedModuleWindow<F>, m: i64) -> Result<Vec<usize>> {
    let n = w.n();
    let t = koszul_betti(w, n, (m, m + n as i64))?;
    Ok((0..=n).map(|i| t.get(i, m + i as i64)).collect())
}

fn last_kind_index(spec: &Option<CandidateSpec>) -> Option<usize> {
    spec.as_ref().and_then(|s| s.parts.iter().map(|p| p.0.order_index()).max())
}

struct Expansion<F: Field> {
    parent: usize,
    spec: CandidateSpec,
    outcome: Result<(NodeStatus, GradedModuleWindow<F>, Option<LinearPencil<F>>, BettiTable, ReductionDiagnostics)>,
}

/// Breadth-first expansion from `root`. Along every path the edge types
/// strictly increase, so each multiset of edges is reached once.
pub fn build_tree<F: Field>(root: &GradedModuleWindow<F>, opts: &TreeOptions) -> Result<ConstructionTree<F>> {
    let field = root.field().clone();
    let n = root.n();
    let m = root.first_nonzero().ok_or_else(|| Error::RootNotLinear("root module is zero".into()))?;
    let pres = minimal_presentation(root, root.hi())?;
    if !pres.is_linear() || pres.generator_degrees().iter().any(|&d| d != m) {
        return Err(Error::RootNotLinear(format!("root presentation:\n{}", pres.betti().render())));
    }
    let sheaf_rank = root.hilbert_data()?.sheaf_rank(n);
    let mut compat = opts.compat.clone();
    compat.sheaf_rank = Some(sheaf_rank);
    // Dual powers must have their socle strictly inside the window.
    compat.max_power = compat.max_power.min((root.hi() - m).max(0) as usize);

    let rank_of = |rows: usize| (rows as i64 - sheaf_rank).max(0) as usize;
    let root_pencil = pres.linear_part.clone();
    let mut nodes = vec![TreeNode {
        id: 0,
        parent: None,
        depth: 0,
        edge: None,
        path: Vec::new(),
        strand: strand_of(root, m)?,
        betti: pres.betti(),
        pencil_shape: root_pencil.as_ref().map(|p| (p.rows(), p.cols(), rank_of(p.rows()))),
        status: NodeStatus::Linear,
        diagnostics: None,
        children: Vec::new(),
    }];
    let mut pencils = vec![root_pencil];
    let mut windows: Vec<Option<GradedModuleWindow<F>>> = vec![Some(root.clone())];
    let mut frontier = vec![0usize];

    for _level in 0..opts.depth {
        let mut jobs: Vec<(usize, CandidateSpec)> = Vec::new();
        for &id in &frontier {
            let after = last_kind_index(&nodes[id].edge);
            let cands: Vec<CandidateSpec> = compatible_candidates(&nodes[id].strand, m, n, &compat)
                .into_iter()
                .filter(|c| after.map_or(true, |a| c.parts.iter().all(|p| p.0.order_index() > a)))
                .collect();
            if cands.is_empty() {
                nodes[id].status = NodeStatus::NoCandidates;
            }
            jobs.extend(cands.into_iter().map(|c| (id, c)));
        }
        let results: Vec<Expansion<F>> = jobs
            .into_par_iter()
            .map(|(parent, spec)| {
                let e = windows[parent].as_ref().expect("frontier window");
                let mut path = nodes[parent].path.clone();
                path.push(spec.label());
                let seed = mix(opts.seed, &path.join("/"));
                let outcome = (|| {
                    let g = spec.build(&field, e.hi())?;
                    let r = sample_reduction(e, &g.window, opts.attempts_per_edge, seed)?;
                    let d = r.diagnostics.clone();
                    let status = if !d.coker_nu2_artinian {
                        NodeStatus::NuNotArtinian
                    } else if d.presentation_linear {
                        NodeStatus::Linear
                    } else {
                        NodeStatus::NotLinear
                    };
                    Ok((status, r.kernel, r.pencil, r.presentation.betti(), d))
                })();
                Expansion { parent, spec, outcome }
            })
            .collect();

        let mut next = Vec::new();
        for ex in results {
            let id = nodes.len();
            let mut path = nodes[ex.parent].path.clone();
            path.push(ex.spec.label());
            let (status, window, pencil, betti, diagnostics, strand) = match ex.outcome {
                Ok((status, w, p, b, d)) => {
                    let strand = if status == NodeStatus::Linear { strand_of(&w, m)? } else { d.expected_strand(&b, m) };
                    (status, Some(w), p, b, Some(d), strand)
                }
                Err(Error::NoSurjectionFound(_)) => (NodeStatus::SamplingExhausted, None, None, BettiTable::new(), None, Vec::new()),
                Err(e) => return Err(e),
            };
            let pencil_shape = if status.has_pencil() {
                pencil.as_ref().map(|p| (p.rows(), p.cols(), rank_of(p.rows())))
            } else {
                None
            };
            nodes[ex.parent].children.push(id);
            nodes.push(TreeNode {
                id,
                parent: Some(ex.parent),
                depth: nodes[ex.parent].depth + 1,
                edge: Some(ex.spec),
                path,
                strand,
                betti,
                pencil_shape,
                status,
                diagnostics,
                children: Vec::new(),
            });
            if status == NodeStatus::Linear {
                next.push(id);
            }
            windows.push(if status == NodeStatus::Linear { window } else { None });
            pencils.push(if status.has_pencil() { pencil } else { None });
        }
        for &id in &frontier {
            windows[id] = None;
        }
        frontier = next;
    }
    Ok(ConstructionTree { n, m, sheaf_rank, nodes, pencils })
}

impl ReductionDiagnostics {
    /// Strand of a leaf: the presentation part, as far as it is linear.
    fn expected_strand(&self, b: &BettiTable, m: i64) -> Vec<usize> {
        vec![b.get(0, m), b.get(1, m + 1)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilEntry {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub node: usize,
    pub path: Vec<String>,
}

/// Every node carrying a pencil, in node order.
pub fn enumerate_pencils<F: Field>(tree: &ConstructionTree<F>) -> Vec<PencilEntry> {
    tree.nodes
        .iter()
        .filter(|nd| nd.status.has_pencil())
        .filter_map(|nd| {
            nd.pencil_shape.map(|(rows, cols, rank)| PencilEntry { rows, cols, rank, node: nd.id, path: nd.path.clone() })
        })
        .collect()
}

fn strand_text(s: &[usize]) -> String {
    s.iter().map(|v| if *v == 0 { "·".to_string() } else { v.to_string() }).collect::<Vec<_>>().join(" ")
}

fn extra_rows(b: &BettiTable, m: i64) -> String {
    let extra: Vec<String> = b
        .iter()
        .filter(|((i, j), v)| *v > 0 && *j != m + *i as i64)
        .map(|((i, j), v)| format!("β{i},{j}={v}"))
        .collect();
    if extra.is_empty() {
        String::new()
    } else {
        format!(" [{}]", extra.join(" "))
    }
}

impl<F: Field> ConstructionTree<F> {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_node(0, &mut out);
        out
    }

    fn render_node(&self, id: usize, out: &mut String) {
        let nd = &self.nodes[id];
        let indent = "  ".repeat(nd.depth);
        let edge = nd.edge.as_ref().map(|e| format!("{} -> ", e.label())).unwrap_or_default();
        let shape = nd.pencil_shape.map(|(a, b, r)| format!(" ({a}x{b}, {r})")).unwrap_or_default();
        let _ = writeln!(out, "{indent}{edge}{}{}{shape} {:?}", strand_text(&nd.strand), extra_rows(&nd.betti, self.m), nd.status);
        for &c in &nd.children {
            self.render_node(c, out);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("tree serializes");
        v["format_version"] = TREE_FORMAT_VERSION.into();
        v
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph construction {\n  node [shape=box];\n");
        for nd in &self.nodes {
            let shape = nd.pencil_shape.map(|(a, b, r)| format!("\\n({a}x{b}, {r})")).unwrap_or_default();
            let _ = writeln!(out, "  n{} [label=\"{}{}\\n{:?}\"];", nd.id, strand_text(&nd.strand), shape, nd.status);
            if let (Some(p), Some(e)) = (nd.parent, &nd.edge) {
                let _ = writeln!(out, "  n{p} -> n{} [label=\"{}\"];", nd.id, e.label());
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn ring(n: usize, lo: i64, hi: i64) -> GradedModuleWindow<Rationals> {
        GradedModuleWindow::free(&Rationals, n, &[0], 0, hi).truncate(lo).unwrap()
    }

    #[test]
    fn residue_field_root_has_no_edges() {
        let w = crate::catalog::koszul_residue_window(&Rationals, 1, 0, 2, 4);
        let t = build_tree(&w, &TreeOptions::default()).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.nodes[0].status, NodeStatus::NoCandidates);
        assert_eq!(t.nodes[0].strand, vec![1, 3, 3]);
    }

    #[test]
    fn quadrics_tree() {
        let t = build_tree(&ring(2, 2, 6), &TreeOptions { depth: 2, ..Default::default() }).unwrap();
        let kids: Vec<_> = t.nodes[0].children.iter().map(|&c| &t.nodes[c]).collect();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].status, NodeStatus::NoCandidates);
        assert_eq!(kids[0].strand, vec![5, 5, 0]);
        let list = enumerate_pencils(&t);
        assert!(list.iter().any(|p| (p.rows, p.cols, p.rank) == (5, 5, 4)));
        assert!(list.iter().any(|p| (p.rows, p.cols, p.rank) == (6, 8, 5)));
        assert!(t.render_text().contains("1x(1,3,3,1) -> 5 5 ·"), "{}", t.render_text());
        assert!(t.to_dot().starts_with("digraph"));
        assert_eq!(t.to_json()["nodes"].as_array().unwrap().len(), t.nodes.len());
    }

    #[test]
    fn nonlinear_root_is_rejected() {
        let q = Rationals;
        let w = GradedModuleWindow::free(&q, 2, &[0, 1], 0, 5);
        assert!(matches!(build_tree(&w, &TreeOptions::default()), Err(Error::RootNotLinear(_))));
    }

    #[test]
    fn empty_tree_has_no_pencils() {
        let t: ConstructionTree<Rationals> = ConstructionTree { n: 2, m: 0, sheaf_rank: 0, nodes: Vec::new(), pencils: Vec::new() };
        assert!(enumerate_pencils(&t).is_empty());
    }
}
