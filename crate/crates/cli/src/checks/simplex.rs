use rand::Rng;

use super::{params, Ctx};
use crate::report::Record;
use crate::sample::{poincare, rational_chain, rational_point, simplex, Rng64};
use causal_loops::geometry::FourVector;

/// Exact checks report the number of failing samples, so the default tolerance admits none.
const EXACT: f64 = 0.5;

pub fn boundary_squared(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    ctx.tags()
        .map(|(label, tag)| {
            ctx.record(params! {"tag" => label}, EXACT, || {
                let mut failures = 0;
                for _ in 0..ctx.samples() {
                    let k = rng.random_range(2..=3);
                    let chain = rational_chain(rng, k, tag);
                    if !chain.boundary()?.boundary()?.is_empty() {
                        failures += 1;
                    }
                }
                Ok((ctx.samples(), failures as f64))
            })
        })
        .collect()
}

pub fn homotopy_identity(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    ctx.tags()
        .map(|(label, tag)| {
            ctx.record(params! {"tag" => label}, EXACT, || {
                let (mut failures, mut n) = (0, 0);
                for _ in 0..ctx.samples() {
                    let k = rng.random_range(1..=3);
                    let chain = rational_chain(rng, k, tag);
                    let z = rational_point(rng);
                    if chain.is_empty() {
                        continue;
                    }
                    n += 1;
                    if !causal_loops::simplex::homotopy_identity_check(&z, &chain)? {
                        failures += 1;
                    }
                }
                Ok((n, failures as f64))
            })
        })
        .collect()
}

pub fn face_covariance(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let p = ctx.cfg.poincare;
    ctx.tags()
        .map(|(label, tag)| {
            ctx.record(
                params! {"tag" => label, "max_rapidity" => p.max_rapidity},
                1e-12,
                || {
                    let mut worst: f64 = 0.0;
                    for _ in 0..p.count {
                        let g = poincare(rng, p.max_rapidity, ctx.scale());
                        let k = rng.random_range(1..=3);
                        let c = simplex(rng, k, FourVector::ZERO, ctx.scale(), tag);
                        let moved = c.poincare_act(&g);
                        for i in 0..=c.dim() {
                            let (a, b) = (moved.face(i)?, c.face(i)?.poincare_act(&g));
                            let size = a
                                .vertices()
                                .iter()
                                .map(|v| v.euclidean_norm())
                                .fold(1.0, f64::max);
                            for (x, y) in a.vertices().iter().zip(b.vertices()) {
                                worst = worst.max((*x - *y).euclidean_norm() / size);
                            }
                            if a.tag() != b.tag() {
                                worst = worst.max(1.0);
                            }
                        }
                    }
                    Ok((p.count, worst))
                },
            )
        })
        .collect()
}
