//! Family profiles, tree construction from profiles, and seeded random
//! structure generators.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BidirectionalTree, CyclicalTree, Digraph, LevelProfile, RootedTree};

/// Regular tree families with closed-form root PageRank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Full m-ary tree: `m^k` vertices at level k.
    MAry { m: u64, h: usize },
    /// Path of h arcs: one vertex per level.
    Unary { h: usize },
    /// Full binomial tree: `C(h, k)` vertices at level k.
    Binomial { h: usize },
    /// Root with hanging paths of h, h-1, ..., 1 vertices: level counts
    /// `1, h, h-1, ..., 1`.
    Path { h: usize },
}

/// Largest height at which binomial level counts stay within exact u64
/// integers.
pub const MAX_BINOMIAL_HEIGHT: usize = 60;

/// Generates the level profile of a family instance.
pub fn generate_family(family: Family) -> Result<LevelProfile> {
    let counts = match family {
        Family::MAry { m, h } => {
            if m < 1 {
                return Err(Error::ParameterOutOfRange(format!("m = {m}, need m >= 1")));
            }
            let mut counts = Vec::with_capacity(h + 1);
            let mut c: u64 = 1;
            for k in 0..=h {
                counts.push(c);
                if k < h {
                    c = c.checked_mul(m).ok_or_else(|| {
                        Error::ParameterOutOfRange(format!("m^k overflows at m={m}, k={}", k + 1))
                    })?;
                }
            }
            counts
        }
        Family::Unary { h } => vec![1; h + 1],
        Family::Binomial { h } => {
            if h > MAX_BINOMIAL_HEIGHT {
                return Err(Error::ParameterOutOfRange(format!(
                    "binomial height {h} exceeds {MAX_BINOMIAL_HEIGHT}"
                )));
            }
            (0..=h).map(|k| binomial(h as u64, k as u64)).collect()
        }
        Family::Path { h } => {
            let mut counts = vec![1u64];
            counts.extend((1..=h).map(|k| (h - k + 1) as u64));
            counts
        }
    };
    LevelProfile::new(counts)
}

/// Exact binomial coefficient; callers keep n <= 60 so this stays in u64.
pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// How level-(k+1) vertices pick their parent in level k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkingPolicy {
    /// Vertex i of a level links to vertex `i mod n_k` of the level above.
    /// Root PageRank is policy-invariant, so this default just gives
    /// balanced in-degrees for readable DOT output.
    #[default]
    RoundRobin,
    /// Every vertex links to the first vertex of the level above.
    FirstParent,
    /// Uniformly random parent, deterministic in the seed.
    Random,
}

/// Builds a rooted tree realizing `profile`, with vertices numbered
/// breadth-first from the root (id 0).
pub fn build_tree(profile: &LevelProfile, policy: LinkingPolicy, seed: u64) -> RootedTree {
    let counts = profile.counts();
    let n = profile.order() as usize;
    let mut starts = Vec::with_capacity(counts.len() + 1);
    let mut acc = 0usize;
    for &c in counts {
        starts.push(acc);
        acc += c as usize;
    }
    starts.push(acc);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(n - 1);
    for k in 1..counts.len() {
        let above = counts[k - 1] as usize;
        for i in 0..counts[k] as usize {
            let pick = match policy {
                LinkingPolicy::RoundRobin => i % above,
                LinkingPolicy::FirstParent => 0,
                LinkingPolicy::Random => rng.random_range(0..above),
            };
            arcs.push(((starts[k] + i) as u32, (starts[k - 1] + pick) as u32));
        }
    }
    let graph = Digraph::new(n, &arcs).expect("profile layout produces a valid digraph");
    RootedTree::new(graph, 0).expect("profile layout produces a rooted tree")
}

/// Random profile with height in `1..=max_height` and level counts in
/// `1..=max_count`.
pub fn random_profile(rng: &mut ChaCha8Rng, max_height: usize, max_count: u64) -> LevelProfile {
    let h = rng.random_range(1..=max_height);
    let mut counts = vec![1u64];
    counts.extend((0..h).map(|_| rng.random_range(1..=max_count)));
    LevelProfile::new(counts).expect("generated counts are positive")
}

/// Random tree: random profile, random linking.
pub fn random_tree(seed: u64, max_height: usize, max_count: u64) -> RootedTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = random_profile(&mut rng, max_height, max_count);
    build_tree(&profile, LinkingPolicy::Random, rng.random())
}

/// Random digraph on `1..=n_max` vertices with the given arc density.
pub fn random_digraph(seed: u64, n_max: usize, density: f64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=n_max);
    let mut arcs = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && rng.random_bool(density) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::new(n, &arcs).expect("generated arcs are valid")
}

/// Random non-interfering cyclical tree: a random tree plus back arcs whose
/// cycles are pairwise vertex-disjoint with out-degree-1 interiors. With
/// `two_cycles_only` every cycle has length 2 and the result converts to a
/// `BidirectionalTree`.
pub fn random_cyclical_tree(seed: u64, max_height: usize, max_count: u64, two_cycles_only: bool) -> CyclicalTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = random_profile(&mut rng, max_height, max_count);
    let tree = build_tree(&profile, LinkingPolicy::Random, rng.random());
    let n = tree.vertex_count();

    let mut used = vec![false; n];
    let mut back_arcs: Vec<(u32, u32)> = Vec::new();
    let attempts = n.max(2);
    for _ in 0..attempts {
        let v = rng.random_range(0..n as u32);
        if tree.level_of(v) == 0 {
            continue;
        }
        // climb a random number of steps to pick the closing vertex
        let max_len = if two_cycles_only {
            2
        } else {
            tree.level_of(v) + 1
        };
        let len = rng.random_range(2..=max_len.max(2));
        let mut chain = vec![v];
        let mut x = v;
        for _ in 0..len - 1 {
            match tree.parent(x) {
                Some(p) => {
                    x = p;
                    chain.push(p);
                }
                None => break,
            }
        }
        if chain.len() < 2 || chain.iter().any(|&c| used[c as usize]) {
            continue;
        }
        let closing = *chain.last().unwrap();
        for &c in &chain {
            used[c as usize] = true;
        }
        back_arcs.push((closing, v));
    }
    CyclicalTree::from_graph_with_partition(
        {
            let mut arcs: Vec<(u32, u32)> = tree.graph().arcs().collect();
            arcs.extend_from_slice(&back_arcs);
            Digraph::new(n, &arcs).expect("disjoint back arcs never duplicate tree arcs")
        },
        tree.root(),
        &back_arcs,
    )
    .expect("construction keeps the cyclical invariants")
}

/// Random non-interfering bidirectional tree.
pub fn random_bidirectional_tree(seed: u64, max_height: usize, max_count: u64) -> BidirectionalTree {
    BidirectionalTree::from_cyclical(random_cyclical_tree(seed, max_height, max_count, true))
        .expect("two_cycles_only yields 2-cycles")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_profile;

    #[test]
    fn family_profiles_match_known_orders() {
        let b = generate_family(Family::Binomial { h: 3 }).unwrap();
        assert_eq!(b.counts(), &[1, 3, 3, 1]);
        assert_eq!(b.order(), 8); // 2^3

        let m = generate_family(Family::MAry { m: 2, h: 2 }).unwrap();
        assert_eq!(m.counts(), &[1, 2, 4]);
        assert_eq!(m.order(), 7); // (m^(h+1)-1)/(m-1)

        let p = generate_family(Family::Path { h: 3 }).unwrap();
        assert_eq!(p.counts(), &[1, 3, 2, 1]);
        assert_eq!(p.order(), 7); // 1 + h(h+1)/2

        let u = generate_family(Family::Unary { h: 4 }).unwrap();
        assert_eq!(u.counts(), &[1, 1, 1, 1, 1]);
    }

    #[test]
    fn family_parameter_errors() {
        assert!(generate_family(Family::MAry { m: 0, h: 2 }).is_err());
        assert!(generate_family(Family::Binomial { h: 61 }).is_err());
        assert!(generate_family(Family::MAry { m: 3, h: 50 }).is_err()); // overflow
    }

    #[test]
    fn path_height_zero_is_root_only() {
        let p = generate_family(Family::Path { h: 0 }).unwrap();
        assert_eq!(p.counts(), &[1]);
    }

    #[test]
    fn build_tree_star_has_single_shape() {
        let p = parse_profile("1 2").unwrap();
        for policy in [
            LinkingPolicy::RoundRobin,
            LinkingPolicy::FirstParent,
            LinkingPolicy::Random,
        ] {
            let t = build_tree(&p, policy, 13);
            let arcs: Vec<_> = t.graph().arcs().collect();
            assert_eq!(arcs, vec![(1, 0), (2, 0)]);
        }
    }

    #[test]
    fn build_tree_forced_parent() {
        // [1,1,2]: both level-2 vertices must link to the single level-1 vertex
        let p = parse_profile("1 1 2").unwrap();
        let t = build_tree(&p, LinkingPolicy::RoundRobin, 0);
        assert_eq!(t.parent(2), Some(1));
        assert_eq!(t.parent(3), Some(1));
    }

    #[test]
    fn build_tree_census_matches_profile() {
        let p = parse_profile("1 3 5 2").unwrap();
        for (policy, seed) in [
            (LinkingPolicy::RoundRobin, 0),
            (LinkingPolicy::FirstParent, 0),
            (LinkingPolicy::Random, 7),
            (LinkingPolicy::Random, 8),
        ] {
            let t = build_tree(&p, policy, seed);
            assert_eq!(t.profile(), p);
        }
    }

    #[test]
    fn random_generators_are_deterministic() {
        let a = random_cyclical_tree(42, 5, 4, false);
        let b = random_cyclical_tree(42, 5, 4, false);
        assert_eq!(
            a.graph().arcs().collect::<Vec<_>>(),
            b.graph().arcs().collect::<Vec<_>>()
        );
        assert!(a.non_interfering());
    }

    #[test]
    fn random_bidirectional_only_has_two_cycles() {
        for seed in 0..20 {
            let bt = random_bidirectional_tree(seed, 5, 3);
            assert!(bt.back_arcs().iter().all(|b| b.cycle_len == 2));
            assert!(bt.non_interfering());
        }
    }
}
