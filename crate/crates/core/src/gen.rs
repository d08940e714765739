//! Seeded random instance generation: a digraph together with two feasible
//! arc sets, built as unions of random arborescences over a shared arc
//! pool. Deterministic for a fixed seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{ArcId, ArcSet, Digraph};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct GenParams {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Additional random decoy arcs appended to the pool.
    pub extra_arcs: usize,
    /// Rooted mode pins every arborescence to vertex 0; otherwise each one
    /// picks its own random root.
    pub rooted: bool,
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub digraph: Digraph,
    pub s: ArcSet,
    pub t: ArcSet,
}

/// Builds `S` from `k` fresh random arborescences, then `T` from `k` more,
/// reusing pool arcs (including those of `S`) whenever the endpoints match
/// and the copy is still unused within `T`.
pub fn generate(params: &GenParams) -> Result<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let mut pool: Vec<(usize, usize)> = Vec::new();

    let mut s_ids: Vec<usize> = Vec::new();
    for _ in 0..params.k {
        for (tail, head) in random_arborescence(&mut rng, n, params.rooted) {
            s_ids.push(pool.len());
            pool.push((tail, head));
        }
    }

    let mut t_ids: Vec<usize> = Vec::new();
    for _ in 0..params.k {
        for (tail, head) in random_arborescence(&mut rng, n, params.rooted) {
            let reused = pool
                .iter()
                .enumerate()
                .position(|(id, &arc)| arc == (tail, head) && !t_ids.contains(&id));
            match reused {
                Some(id) => t_ids.push(id),
                None => {
                    t_ids.push(pool.len());
                    pool.push((tail, head));
                }
            }
        }
    }

    for _ in 0..params.extra_arcs {
        let tail = rng.random_range(0..n);
        let mut head = rng.random_range(0..n);
        while head == tail || (params.rooted && head == 0) {
            head = rng.random_range(0..n);
        }
        pool.push((tail, head));
    }

    let digraph = Digraph::new(n, &pool, params.rooted.then_some(0))?;
    let m = digraph.arc_count();
    Ok(GeneratedInstance {
        digraph,
        s: ArcSet::from_ids(m, s_ids.into_iter().map(ArcId)),
        t: ArcSet::from_ids(m, t_ids.into_iter().map(ArcId)),
    })
}

fn random_arborescence(rng: &mut ChaCha8Rng, n: usize, rooted: bool) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    if rooted {
        order[1..].shuffle(rng);
    } else {
        order.shuffle(rng);
    }
    let mut arcs = Vec::with_capacity(n - 1);
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        arcs.push((parent, order[i]));
    }
    arcs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiroot;
    use crate::packing::{check_feasible, PackingInstance};

    #[test]
    fn rooted_instances_are_feasible_and_deterministic() {
        for seed in 0..30u64 {
            let params = GenParams {
                n: 4,
                k: 2,
                seed,
                extra_arcs: 2,
                rooted: true,
            };
            let a = generate(&params).unwrap();
            let b = generate(&params).unwrap();
            assert_eq!(a.digraph, b.digraph);
            assert_eq!((&a.s, &a.t), (&b.s, &b.t));
            let inst = PackingInstance::new(a.digraph.clone(), 2).unwrap();
            assert!(check_feasible(&inst, &a.s).is_feasible());
            assert!(check_feasible(&inst, &a.t).is_feasible());
        }
    }

    #[test]
    fn multiroot_instances_are_feasible() {
        for seed in 0..30u64 {
            let params = GenParams {
                n: 5,
                k: 1,
                seed,
                extra_arcs: 1,
                rooted: false,
            };
            let g = generate(&params).unwrap();
            assert!(multiroot::check_feasible_multiroot(&g.digraph, 1, &g.s)
                .unwrap()
                .is_feasible());
            assert!(multiroot::check_feasible_multiroot(&g.digraph, 1, &g.t)
                .unwrap()
                .is_feasible());
        }
    }
}
