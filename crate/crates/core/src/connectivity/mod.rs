//! Vertex connectivity, minimum vertex cuts, and the super-/hyper-connectivity
//! certificates.
//!
//! Exhaustive certificates enumerate every `κ`-subset of vertices and are only
//! offered while the subset count stays within [`MAX_CUT_SUBSETS`] and the
//! graph fits a 128-bit vertex mask (`n ≤ 5`). Beyond that the certificates
//! fall back to a structural mode that is labeled as such.

pub mod maxflow;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{PancakeGraph, VertexId};
use crate::permutations::Permutation;
use maxflow::SplitNetwork;

/// Upper bound on the number of vertex subsets scanned by cut enumeration.
pub const MAX_CUT_SUBSETS: u64 = 20_000_000;

/// Largest vertex count representable in the enumeration bit masks.
pub const MAX_MASK_VERTICES: usize = 128;

/// Which source–sink pairs the max-flow minimization runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSchedule {
    /// The identity and each of its neighbors, against all their non-neighbors.
    /// Sound for any graph with minimum degree `δ ≥ κ`.
    IdentityAndNeighbors,
    /// Only the identity against its non-neighbors. Sound for vertex-transitive
    /// graphs, where every minimum cut can be translated off the identity.
    IdentityOnly,
}

/// Exact vertex connectivity via vertex-split max-flow.
pub fn vertex_connectivity(g: &PancakeGraph) -> usize {
    vertex_connectivity_with(g, PairSchedule::IdentityAndNeighbors)
}

pub fn vertex_connectivity_with(g: &PancakeGraph, schedule: PairSchedule) -> usize {
    let count = g.vertex_count();
    let delta = g.degree();
    let mut sources = vec![g.identity()];
    if schedule == PairSchedule::IdentityAndNeighbors {
        sources.extend_from_slice(g.neighbors(g.identity()));
    }
    let pairs: Vec<(VertexId, VertexId)> = sources
        .iter()
        .flat_map(|&s| (0..count as VertexId).filter(move |&t| t != s && !g.is_edge(s, t)).map(move |t| (s, t)))
        .collect();
    if pairs.is_empty() {
        // Complete graph.
        return count - 1;
    }
    let net = SplitNetwork::new(g);
    pairs
        .par_iter()
        .map_init(|| net.workspace(), |ws, &(s, t)| net.local_connectivity_in(ws, s, t, delta))
        .min()
        .unwrap_or(delta)
        .min(delta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCut {
    pub members: Vec<VertexId>,
    /// Component sizes of `V ∖ members`, ascending.
    pub component_profile: Vec<usize>,
    /// `Some(v)` when `members = N(v)`.
    pub is_vertex_neighborhood: Option<VertexId>,
}

impl VertexCut {
    pub fn member_labels(&self, g: &PancakeGraph) -> Vec<Permutation> {
        self.members.iter().map(|&v| g.label(v)).collect()
    }

    /// Exactly two components, one of them a single vertex.
    pub fn isolates_single_vertex(&self) -> bool {
        self.component_profile.len() == 2 && self.component_profile[0] == 1
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Whether exhaustive `k`-cut enumeration fits the budget.
pub fn exhaustive_feasible(g: &PancakeGraph, k: usize) -> bool {
    g.vertex_count() <= MAX_MASK_VERTICES && binomial(g.vertex_count() as u64, k as u64) <= MAX_CUT_SUBSETS
}

fn refuse_enumeration(g: &PancakeGraph, k: usize) -> Error {
    Error::refusal(
        format!(
            "enumerating all {k}-subsets of P_{} ({} subsets, {} vertices)",
            g.n(),
            binomial(g.vertex_count() as u64, k as u64),
            g.vertex_count()
        ),
        format!("at most {MAX_CUT_SUBSETS} subsets and {MAX_MASK_VERTICES} vertices"),
    )
}

/// Every `k`-subset whose removal disconnects `g`, sorted by member tuple.
pub fn enumerate_minimum_vertex_cuts(g: &PancakeGraph, k: usize) -> Result<Vec<VertexCut>> {
    if !exhaustive_feasible(g, k) {
        return Err(refuse_enumeration(g, k));
    }
    let count = g.vertex_count();
    let full: u128 = if count == 128 { u128::MAX } else { (1u128 << count) - 1 };
    let masks: Vec<u128> =
        (0..count as VertexId).map(|v| g.neighbors(v).iter().fold(0u128, |m, &w| m | 1u128 << w)).collect();
    let neighborhood_of: HashMap<u128, VertexId> = masks.iter().enumerate().map(|(v, &m)| (m, v as VertexId)).collect();

    if k == 0 || k >= count {
        return Ok(Vec::new());
    }
    let mut cuts: Vec<VertexCut> = (0..=count - k)
        .into_par_iter()
        .flat_map_iter(|lead| {
            let mut found = Vec::new();
            let mut rest: Vec<usize> = (lead + 1..lead + k).collect();
            loop {
                let cut_mask = rest.iter().fold(1u128 << lead, |m, &v| m | 1u128 << v);
                let alive = full & !cut_mask;
                if !is_connected_mask(&masks, alive) {
                    let mut members = Vec::with_capacity(k);
                    members.push(lead as VertexId);
                    members.extend(rest.iter().map(|&v| v as VertexId));
                    found.push(VertexCut {
                        members,
                        component_profile: component_profile_mask(&masks, alive),
                        is_vertex_neighborhood: neighborhood_of.get(&cut_mask).copied(),
                    });
                }
                if !next_combination(&mut rest, count) {
                    break;
                }
            }
            found
        })
        .collect();
    cuts.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(cuts)
}

// Advances a strictly increasing index tuple to the next one below `bound`.
fn next_combination(c: &mut [usize], bound: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < bound - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn reach_mask(masks: &[u128], alive: u128, start: u32) -> u128 {
    let mut reach = 1u128 << start;
    let mut frontier = reach;
    while frontier != 0 {
        let mut grown = 0u128;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros();
            f &= f - 1;
            grown |= masks[v as usize];
        }
        frontier = grown & alive & !reach;
        reach |= frontier;
        if reach == alive {
            break;
        }
    }
    reach
}

fn is_connected_mask(masks: &[u128], alive: u128) -> bool {
    alive == 0 || reach_mask(masks, alive, alive.trailing_zeros()) == alive
}

fn component_profile_mask(masks: &[u128], mut alive: u128) -> Vec<usize> {
    let mut sizes = Vec::new();
    while alive != 0 {
        let comp = reach_mask(masks, alive, alive.trailing_zeros());
        sizes.push(comp.count_ones() as usize);
        alive &= !comp;
    }
    sizes.sort_unstable();
    sizes
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    /// Every minimum cut was enumerated.
    Exhaustive,
    /// Evidence from the structural route only; not a machine proof.
    Structural,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperConnectivity {
    pub mode: CertificateMode,
    pub result: bool,
    /// Number of minimum cuts found (exhaustive mode only).
    pub minimum_cuts: Option<usize>,
    /// Minimum cuts that are not the neighborhood of any vertex.
    pub witnesses: Vec<VertexCut>,
    /// Structural mode: `κ(P_{n−1}) = n − 2` on the last-symbol copies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copy_connectivity: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperConnectivity {
    pub mode: CertificateMode,
    pub result: bool,
    /// Size of the single component of `P_n − N[I]`, if connected.
    pub closed_neighborhood_residue: Option<usize>,
    /// Minimum cuts violating the two-component/singleton shape (exhaustive mode).
    pub witnesses: Vec<VertexCut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectivityCertificate {
    pub n: usize,
    pub kappa: usize,
    pub min_degree: usize,
    #[serde(rename = "super")]
    pub super_connected: SuperConnectivity,
    #[serde(rename = "hyper")]
    pub hyper_connected: HyperConnectivity,
}

/// Requested certificate strength.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeRequest {
    /// Exhaustive when within budget, structural otherwise.
    Auto,
    /// Exhaustive or a scale refusal.
    Exhaustive,
    Structural,
}

fn resolve_mode(g: &PancakeGraph, kappa: usize, request: ModeRequest) -> Result<CertificateMode> {
    match request {
        ModeRequest::Structural => Ok(CertificateMode::Structural),
        ModeRequest::Exhaustive if !exhaustive_feasible(g, kappa) => Err(refuse_enumeration(g, kappa)),
        ModeRequest::Exhaustive => Ok(CertificateMode::Exhaustive),
        ModeRequest::Auto if exhaustive_feasible(g, kappa) => Ok(CertificateMode::Exhaustive),
        ModeRequest::Auto => Ok(CertificateMode::Structural),
    }
}

fn schedule_for(g: &PancakeGraph) -> PairSchedule {
    if g.n() <= 6 {
        PairSchedule::IdentityAndNeighbors
    } else {
        PairSchedule::IdentityOnly
    }
}

/// `P_n − N[I]` component sizes.
pub fn closed_neighborhood_residue(g: &PancakeGraph) -> Vec<usize> {
    g.connected_components(&g.closed_neighborhood(g.identity())).iter().map(Vec::len).collect()
}

/// Structural super-connectivity evidence: `n ≥ 4`, `κ(P_n) = n − 1`, and each
/// last-symbol block induces a copy of `P_{n−1}` with connectivity `n − 2`.
fn structural_super(g: &PancakeGraph, kappa: usize) -> Result<SuperConnectivity> {
    let n = g.n();
    let mut copy_connectivity = None;
    let mut result = n >= 4 && kappa == n - 1;
    if result {
        let smaller = PancakeGraph::build(n - 1)?;
        let copies_ok = (1..=n).all(|j| crate::automorphisms::copy_isomorphism_holds(g, &smaller, j).unwrap_or(false));
        let inner = vertex_connectivity_with(&smaller, schedule_for(&smaller));
        copy_connectivity = Some(inner);
        result = copies_ok && inner == n - 2;
    }
    Ok(SuperConnectivity {
        mode: CertificateMode::Structural,
        result,
        minimum_cuts: None,
        witnesses: Vec::new(),
        copy_connectivity,
    })
}

pub fn is_super_connected(g: &PancakeGraph) -> Result<SuperConnectivity> {
    let kappa = vertex_connectivity_with(g, schedule_for(g));
    super_with(g, kappa, ModeRequest::Auto, None)
}

fn super_with(
    g: &PancakeGraph,
    kappa: usize,
    request: ModeRequest,
    cuts: Option<&[VertexCut]>,
) -> Result<SuperConnectivity> {
    match resolve_mode(g, kappa, request)? {
        CertificateMode::Structural => structural_super(g, kappa),
        CertificateMode::Exhaustive => {
            let owned;
            let cuts = match cuts {
                Some(c) => c,
                None => {
                    owned = enumerate_minimum_vertex_cuts(g, kappa)?;
                    &owned
                }
            };
            let witnesses: Vec<VertexCut> =
                cuts.iter().filter(|c| c.is_vertex_neighborhood.is_none()).cloned().collect();
            Ok(SuperConnectivity {
                mode: CertificateMode::Exhaustive,
                result: witnesses.is_empty(),
                minimum_cuts: Some(cuts.len()),
                witnesses,
                copy_connectivity: None,
            })
        }
    }
}

pub fn is_hyper_connected(g: &PancakeGraph) -> Result<HyperConnectivity> {
    let kappa = vertex_connectivity_with(g, schedule_for(g));
    let sup = super_with(g, kappa, ModeRequest::Auto, None)?;
    hyper_with(g, kappa, ModeRequest::Auto, &sup, None)
}

/// Structural route for hyper-connectivity: super-connected plus `P_n − N[I]`
/// connected, lifted to every vertex by vertex-transitivity.
pub fn is_hyper_connected_structural(g: &PancakeGraph) -> Result<HyperConnectivity> {
    let kappa = vertex_connectivity_with(g, schedule_for(g));
    let sup = super_with(g, kappa, ModeRequest::Auto, None)?;
    hyper_with(g, kappa, ModeRequest::Structural, &sup, None)
}

fn hyper_with(
    g: &PancakeGraph,
    kappa: usize,
    request: ModeRequest,
    sup: &SuperConnectivity,
    cuts: Option<&[VertexCut]>,
) -> Result<HyperConnectivity> {
    let residue = closed_neighborhood_residue(g);
    let residue_single = (residue.len() == 1).then(|| residue[0]);
    match resolve_mode(g, kappa, request)? {
        CertificateMode::Structural => Ok(HyperConnectivity {
            mode: CertificateMode::Structural,
            result: sup.result && residue_single.is_some(),
            closed_neighborhood_residue: residue_single,
            witnesses: Vec::new(),
        }),
        CertificateMode::Exhaustive => {
            let owned;
            let cuts = match cuts {
                Some(c) => c,
                None => {
                    owned = enumerate_minimum_vertex_cuts(g, kappa)?;
                    &owned
                }
            };
            let witnesses: Vec<VertexCut> = cuts.iter().filter(|c| !c.isolates_single_vertex()).cloned().collect();
            Ok(HyperConnectivity {
                mode: CertificateMode::Exhaustive,
                result: witnesses.is_empty(),
                closed_neighborhood_residue: residue_single,
                witnesses,
            })
        }
    }
}

/// Full connectivity certificate, enumerating minimum cuts at most once.
pub fn certify_connectivity(g: &PancakeGraph, request: ModeRequest) -> Result<ConnectivityCertificate> {
    let kappa = vertex_connectivity_with(g, schedule_for(g));
    let mode = resolve_mode(g, kappa, request)?;
    let cuts = match mode {
        CertificateMode::Exhaustive => Some(enumerate_minimum_vertex_cuts(g, kappa)?),
        CertificateMode::Structural => None,
    };
    let sup = super_with(g, kappa, request, cuts.as_deref())?;
    let hyper = hyper_with(g, kappa, request, &sup, cuts.as_deref())?;
    Ok(ConnectivityCertificate {
        n: g.n(),
        kappa,
        min_degree: g.degree(),
        super_connected: sup,
        hyper_connected: hyper,
    })
}
