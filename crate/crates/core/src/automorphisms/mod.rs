//! The automorphism group of `P_n` and the structural facts used to pin it down.
//!
//! Vertex maps are image arrays over vertex ids (`map[v]` is the image of `v`).

pub mod schreier_sims;
pub mod search;

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BlockKind, PancakeGraph, VertexId};
use crate::permutations::{factorial, GeneratorSet, Permutation};
use schreier_sims::{is_identity, Perm, StabilizerChain};
pub use search::is_automorphism;

/// Largest `n` accepted by [`compute_automorphism_group`].
pub const MAX_AUTOMORPHISM_N: usize = 7;

/// Left translation `v ↦ y·v`.
pub fn left_translation(g: &PancakeGraph, y: &Permutation) -> Result<Perm> {
    if y.degree() != g.n() {
        return Err(Error::domain(format!("{y} is not an element of S_{}", g.n())));
    }
    (0..g.vertex_count() as VertexId).map(|v| g.id_of(&y.compose(&g.label(v))?)).collect()
}

/// Conjugation `v ↦ t·v·t⁻¹` as a vertex map.
pub fn conjugation_map(g: &PancakeGraph, t: &Permutation) -> Result<Perm> {
    let t_inv = t.inverse();
    (0..g.vertex_count() as VertexId).map(|v| g.id_of(&t.compose(&g.label(v))?.compose(&t_inv)?)).collect()
}

/// Left translations by the prefix reversals; they generate `L(S_n)`.
pub fn left_regular_generators(g: &PancakeGraph) -> Result<Vec<Perm>> {
    GeneratorSet::new(g.n())?.reversals().iter().map(|r| left_translation(g, r)).collect()
}

/// Undirected edge index `u·(n−1) + slot` with `u` the smaller endpoint.
fn edge_index(g: &PancakeGraph, u: VertexId, v: VertexId) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    let slot = g.neighbors(a).iter().position(|&w| w == b).expect("edge");
    a as usize * g.degree() + slot
}

pub fn edge_orbit_count(g: &PancakeGraph, generators: &[Perm]) -> usize {
    let mut parent: Vec<usize> = (0..g.vertex_count() * g.degree()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    for gamma in generators {
        for &(u, v) in &edges {
            let a = find(&mut parent, edge_index(g, u, v));
            let b = find(&mut parent, edge_index(g, gamma[u as usize], gamma[v as usize]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: HashSet<usize> = edges.iter().map(|&(u, v)| find(&mut parent, edge_index(g, u, v))).collect();
    roots.len()
}

#[derive(Clone, Debug, Serialize)]
pub struct AutGroup {
    pub n: usize,
    pub generators: Vec<Perm>,
    pub order: u128,
    /// Base points of the stabilizer chain.
    pub base: Vec<u32>,
    pub orbit_sizes: Vec<usize>,
    pub regular: bool,
    pub vertex_orbit_count: usize,
    pub edge_orbit_count: usize,
    pub search_tree_nodes: u64,
}

pub fn compute_automorphism_group(g: &PancakeGraph) -> Result<AutGroup> {
    if g.n() > MAX_AUTOMORPHISM_N {
        return Err(Error::refusal(
            format!("automorphism search on P_{}", g.n()),
            format!("n <= {MAX_AUTOMORPHISM_N}"),
        ));
    }
    let outcome = search::search_automorphisms(g);
    for gamma in &outcome.generators {
        if !is_automorphism(g, gamma) {
            return Err(Error::domain("search produced a non-automorphism"));
        }
    }
    let chain = StabilizerChain::new(g.vertex_count(), &outcome.generators);
    let order = chain.order();
    if order != outcome.order() {
        return Err(Error::domain(format!(
            "stabilizer chain order {order} disagrees with search orbit product {}",
            outcome.order()
        )));
    }
    let vertex_orbit_count = {
        let mut roots = HashSet::new();
        let mut comp: Vec<u32> = (0..g.vertex_count() as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for gamma in &outcome.generators {
            for v in 0..g.vertex_count() as u32 {
                let (a, b) = (find(&mut comp, v), find(&mut comp, gamma[v as usize]));
                if a != b {
                    comp[a.max(b) as usize] = a.min(b);
                }
            }
        }
        for v in 0..g.vertex_count() as u32 {
            roots.insert(find(&mut comp, v));
        }
        roots.len()
    };
    let regular = vertex_orbit_count == 1 && order == g.vertex_count() as u128;
    Ok(AutGroup {
        n: g.n(),
        edge_orbit_count: edge_orbit_count(g, &outcome.generators),
        generators: outcome.generators,
        order,
        base: chain.base(),
        orbit_sizes: chain.orbit_sizes(),
        regular,
        vertex_orbit_count,
        search_tree_nodes: outcome.tree_nodes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrrCertificate {
    pub n: usize,
    pub order: u128,
    pub vertex_count: usize,
    /// `|Aut| / n!`; `|Aut|` is always a multiple of `n!`.
    pub ratio: u128,
    pub regular: bool,
    pub left_translations_preserve_edges: bool,
    pub grr: bool,
}

/// `Aut(P_n) = L(S_n)` exactly when the group is regular of order `n!` and
/// every left translation is an automorphism.
pub fn certify_grr(g: &PancakeGraph, aut: &AutGroup) -> Result<GrrCertificate> {
    let n = g.n();
    let left_ok = (0..g.vertex_count() as u64).all(|r| {
        let y = Permutation::unrank(r, n).expect("rank in range");
        left_translation(g, &y).map(|m| is_automorphism(g, &m)).unwrap_or(false)
    });
    let vertex_count = g.vertex_count();
    let grr = aut.regular && aut.order == vertex_count as u128 && left_ok;
    Ok(GrrCertificate {
        n,
        order: aut.order,
        vertex_count,
        ratio: aut.order / factorial(n) as u128,
        regular: aut.regular,
        left_translations_preserve_edges: left_ok,
        grr,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupAutoStabilizer {
    pub n: usize,
    /// Conjugating permutations `t` with `t·PR_n·t⁻¹ = PR_n`, ascending.
    pub elements: Vec<Permutation>,
    /// Only inner automorphisms were searched. At `n = 6` the outer class is missing.
    pub inner_only: bool,
    pub complete: bool,
}

/// All inner automorphisms of `S_n` that fix `PR_n` setwise.
pub fn generating_set_stabilizer(n: usize) -> Result<GroupAutoStabilizer> {
    if !(3..=MAX_AUTOMORPHISM_N).contains(&n) {
        return Err(Error::domain(format!("generating-set stabilizer needs 3 <= n <= {MAX_AUTOMORPHISM_N}")));
    }
    let gens = GeneratorSet::new(n)?;
    let mut elements = Vec::new();
    for r in 0..factorial(n) {
        let t = Permutation::unrank(r, n)?;
        let t_inv = t.inverse();
        let fixes = gens
            .reversals()
            .iter()
            .all(|s| gens.contains(&t.compose(s).and_then(|x| x.compose(&t_inv)).expect("same degree")));
        if fixes {
            elements.push(t);
        }
    }
    Ok(GroupAutoStabilizer { n, elements, inner_only: true, complete: n != 6 })
}

#[derive(Clone, Debug, Serialize)]
pub struct SemidirectCheck {
    pub generated_order: u128,
    pub computed_order: u128,
    pub aut_contained: bool,
    pub passed: bool,
}

/// Rebuilds a group from `L(S_n)` and the vertex maps induced by the
/// generating-set stabilizer, and compares it with the computed `Aut(P_n)`.
pub fn semidirect_reconstruction(g: &PancakeGraph, aut: &AutGroup) -> Result<SemidirectCheck> {
    let mut gens = left_regular_generators(g)?;
    for t in generating_set_stabilizer(g.n())?.elements {
        let map = conjugation_map(g, &t)?;
        if !is_identity(&map) {
            gens.push(map);
        }
    }
    let chain = StabilizerChain::new(g.vertex_count(), &gens);
    let aut_contained = aut.generators.iter().all(|gamma| chain.contains(gamma));
    let generated_order = chain.order();
    Ok(SemidirectCheck {
        generated_order,
        computed_order: aut.order,
        aut_contained,
        passed: aut_contained && generated_order == aut.order,
    })
}

/// Every set `X` with `N(X) = B^(i)` and `|X| = (n−1)!`, sorted.
///
/// Such an `X` misses `B^(i)` and has no outside neighbors elsewhere, so it
/// is a union of components of `P_n − B^(i)`; only those unions are tried.
pub fn neighborhood_determination(g: &PancakeGraph, i: usize) -> Result<Vec<Vec<VertexId>>> {
    let block = g.block_members(BlockKind::FirstSymbol(i))?;
    let target = factorial(g.n() - 1) as usize;
    let comps = g.connected_components(&block);
    const MAX_COMPONENTS: usize = 40;
    if comps.len() > MAX_COMPONENTS {
        return Err(Error::refusal(
            format!("{} components of P_{} − B^({i})", comps.len(), g.n()),
            format!("at most {MAX_COMPONENTS} components"),
        ));
    }
    let mut solutions = Vec::new();
    let mut chosen = Vec::new();
    fn walk(
        comps: &[Vec<VertexId>],
        next: usize,
        size: usize,
        target: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if size == target {
            out.push(chosen.clone());
            return;
        }
        for c in next..comps.len() {
            if size + comps[c].len() <= target {
                chosen.push(c);
                walk(comps, c + 1, size + comps[c].len(), target, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut unions = Vec::new();
    walk(&comps, 0, 0, target, &mut chosen, &mut unions);
    for pick in unions {
        let mut x: Vec<VertexId> = pick.iter().flat_map(|&c| comps[c].iter().copied()).collect();
        x.sort_unstable();
        if g.neighborhood(&x) == block {
            solutions.push(x);
        }
    }
    solutions.sort();
    Ok(solutions)
}

/// `φ(π) = (j n)·π`, mapping `S_{n−1}` (embedded with `π(n) = n`) into `B_(j)`.
pub fn copy_map(g: &PancakeGraph, smaller: &PancakeGraph, j: usize) -> Result<Vec<VertexId>> {
    let n = g.n();
    if smaller.n() + 1 != n {
        return Err(Error::domain("copy map needs P_{n-1} and P_n"));
    }
    let swap = Permutation::transposition(n, j, n)?;
    (0..smaller.vertex_count() as VertexId).map(|v| g.id_of(&swap.compose(&smaller.label(v).extend_to(n)?)?)).collect()
}

/// Whether `φ` is an isomorphism `P_{n−1} → P_n[B_(j)]`.
pub fn copy_isomorphism_holds(g: &PancakeGraph, smaller: &PancakeGraph, j: usize) -> Result<bool> {
    let phi = copy_map(g, smaller, j)?;
    let mut image = phi.clone();
    image.sort_unstable();
    if image != g.block_members(BlockKind::LastSymbol(j))? {
        return Ok(false);
    }
    let count = smaller.vertex_count();
    for a in 0..count {
        for b in a + 1..count {
            let (a, b) = (a as VertexId, b as VertexId);
            if smaller.is_edge(a, b) != g.is_edge(phi[a as usize], phi[b as usize]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct CopyStructureCertificate {
    pub n: usize,
    /// For `j = 1..=n`: `φ` is an isomorphism onto `P_n[B_(j)]`.
    pub isomorphisms: Vec<bool>,
    /// Each vertex of `B^(i)` has exactly one neighbor in each `B^(j)`, `j ≠ i`.
    pub first_symbol_exact_one: bool,
    /// Each vertex of `B^(i)_(j)` has exactly one neighbor in `B^(j)_(i)` and
    /// in each `B^(k)_(j)`, `k ∉ {i, j}`.
    pub first_last_exact_one: bool,
    pub passed: bool,
}

pub fn verify_copy_structure(n: usize) -> Result<CopyStructureCertificate> {
    if n < 3 {
        return Err(Error::domain(format!("copy structure needs n >= 3, got {n}")));
    }
    let g = PancakeGraph::build(n)?;
    let smaller = PancakeGraph::build(n - 1)?;
    let isomorphisms = (1..=n).map(|j| copy_isomorphism_holds(&g, &smaller, j)).collect::<Result<Vec<_>>>()?;

    let labels: Vec<Permutation> = (0..g.vertex_count() as VertexId).map(|v| g.label(v)).collect();
    let mut first_symbol_exact_one = true;
    let mut first_last_exact_one = true;
    for v in 0..g.vertex_count() {
        let (i, j) = (labels[v].first(), labels[v].last());
        let mut by_first = vec![0usize; n + 1];
        // Neighbor counts in B^(k)_(l), indexed [k][l].
        let mut by_both = vec![vec![0usize; n + 1]; n + 1];
        for &w in g.neighbors(v as VertexId) {
            let lw = &labels[w as usize];
            by_first[lw.first()] += 1;
            by_both[lw.first()][lw.last()] += 1;
        }
        if (1..=n).any(|k| k != i && by_first[k] != 1) {
            first_symbol_exact_one = false;
        }
        if by_both[j][i] != 1 || (1..=n).any(|k| k != i && k != j && by_both[k][j] != 1) {
            first_last_exact_one = false;
        }
    }
    let passed = isomorphisms.iter().all(|&ok| ok) && first_symbol_exact_one && first_last_exact_one;
    Ok(CopyStructureCertificate { n, isomorphisms, first_symbol_exact_one, first_last_exact_one, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u8]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn left_translation_examples() {
        let g = PancakeGraph::build(4).unwrap();
        let id = left_translation(&g, &Permutation::identity(4)).unwrap();
        assert!(is_identity(&id));
        for r in 0..24 {
            let y = Permutation::unrank(r, 4).unwrap();
            assert!(is_automorphism(&g, &left_translation(&g, &y).unwrap()));
        }
        let y = p(&[2, 1, 3, 4]);
        let m = left_translation(&g, &y).unwrap();
        assert!(!is_identity(&m));
        assert!(is_identity(&schreier_sims::then(&m, &m)));
    }

    #[test]
    fn automorphism_orders() {
        for (n, order) in [(3, 12u128), (4, 48), (5, 120)] {
            let g = PancakeGraph::build(n).unwrap();
            let aut = compute_automorphism_group(&g).unwrap();
            assert_eq!(aut.order, order, "n = {n}");
            assert_eq!(aut.vertex_orbit_count, 1);
            assert_eq!(aut.regular, n >= 5);
        }
    }

    #[test]
    fn grr_flags() {
        for (n, grr, ratio) in [(3, false, 2u128), (4, false, 2), (5, true, 1)] {
            let g = PancakeGraph::build(n).unwrap();
            let aut = compute_automorphism_group(&g).unwrap();
            let cert = certify_grr(&g, &aut).unwrap();
            assert_eq!(cert.grr, grr, "n = {n}");
            assert_eq!(cert.ratio, ratio);
            assert!(cert.left_translations_preserve_edges);
        }
    }

    #[test]
    fn stabilizer_of_connection_set() {
        let s4 = generating_set_stabilizer(4).unwrap();
        assert_eq!(s4.elements, vec![Permutation::identity(4), p(&[1, 3, 2, 4])]);
        let s5 = generating_set_stabilizer(5).unwrap();
        assert_eq!(s5.elements, vec![Permutation::identity(5)]);
        // Brute force over S_3: t must permute {(1 2), (1 3)} by conjugation.
        let s3 = generating_set_stabilizer(3).unwrap();
        assert_eq!(s3.elements, vec![Permutation::identity(3), p(&[1, 3, 2])]);
        assert!(!generating_set_stabilizer(6).unwrap().complete);
    }

    #[test]
    fn p4_semidirect_product() {
        let g = PancakeGraph::build(4).unwrap();
        let aut = compute_automorphism_group(&g).unwrap();
        let check = semidirect_reconstruction(&g, &aut).unwrap();
        assert_eq!(check.generated_order, 48);
        assert!(check.passed);
    }

    #[test]
    fn component_method_matches_brute_force_at_n3() {
        let g = PancakeGraph::build(3).unwrap();
        let block = g.block_members(BlockKind::FirstSymbol(1)).unwrap();
        let outside: Vec<VertexId> = (0..6).filter(|v| !block.contains(v)).collect();
        let mut brute = Vec::new();
        for a in 0..outside.len() {
            for b in a + 1..outside.len() {
                let x = vec![outside[a], outside[b]];
                if g.neighborhood(&x) == block {
                    brute.push(x);
                }
            }
        }
        assert_eq!(neighborhood_determination(&g, 1).unwrap(), brute);
        assert_eq!(brute.len(), 2);
    }

    #[test]
    fn neighborhood_determination_unique_at_n5() {
        let g = PancakeGraph::build(5).unwrap();
        for i in 1..=5 {
            let sols = neighborhood_determination(&g, i).unwrap();
            assert_eq!(sols, vec![g.block_members(BlockKind::LastSymbol(i)).unwrap()]);
        }
    }

    #[test]
    fn copy_structure_small() {
        for n in 3..=5 {
            let cert = verify_copy_structure(n).unwrap();
            assert!(cert.passed, "n = {n}: {cert:?}");
            assert_eq!(cert.isomorphisms.len(), n);
        }
    }

    #[test]
    fn copy_map_lands_in_block() {
        let g = PancakeGraph::build(4).unwrap();
        let smaller = PancakeGraph::build(3).unwrap();
        let phi = copy_map(&g, &smaller, 4).unwrap();
        assert!(phi.iter().all(|&v| g.label(v).last() == 4));
        assert!(copy_isomorphism_holds(&g, &smaller, 4).unwrap());
    }

    #[test]
    fn edge_orbits_of_left_regular_group() {
        let g = PancakeGraph::build(5).unwrap();
        let gens = left_regular_generators(&g).unwrap();
        assert_eq!(edge_orbit_count(&g, &gens), 4);
    }
}
