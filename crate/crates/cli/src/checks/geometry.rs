use causal_loops::geometry::{cones_causally_disjoint, DoubleCone, FourVector, Tri};
use rand::Rng;

use super::{params, Ctx};
use crate::report::Record;
use crate::sample::{lorentz, poincare, vector, Rng64};

pub fn group_law(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let p = ctx.cfg.poincare;
    vec![
        ctx.record(params! {"max_rapidity" => p.max_rapidity}, 1e-10, || {
            let mut worst: f64 = 0.0;
            for _ in 0..p.count {
                let (p1, p2) = (
                    poincare(rng, p.max_rapidity, ctx.scale()),
                    poincare(rng, p.max_rapidity, ctx.scale()),
                );
                let y = vector(rng, ctx.scale());
                let lhs = p1.compose(&p2).apply(&y);
                let rhs = p1.apply(&p2.apply(&y));
                let size = lhs.euclidean_norm().max(1.0);
                worst = worst.max((lhs - rhs).euclidean_norm() / size);
                worst = worst.max((p1.inverse().apply(&p1.apply(&y)) - y).euclidean_norm() / size);
            }
            Ok((p.count, worst))
        }),
    ]
}

pub fn lorentz_invariance(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let p = ctx.cfg.poincare;
    vec![
        ctx.record(params! {"max_rapidity" => p.max_rapidity}, 1e-12, || {
            let mut worst: f64 = 0.0;
            for _ in 0..p.count {
                let l = lorentz(rng, p.max_rapidity);
                let (x, y) = (vector(rng, ctx.scale()), vector(rng, ctx.scale()));
                let (lx, ly) = (l.apply(&x), l.apply(&y));
                let size = (lx.euclidean_norm() * ly.euclidean_norm()).max(1.0);
                worst = worst.max((lx.dot(&ly) - x.dot(&y)).abs() / size);
            }
            Ok((p.count, worst))
        }),
    ]
}

fn point_in(rng: &mut Rng64, o: &DoubleCone) -> FourVector {
    loop {
        let x = o.center() + vector(rng, o.radius());
        if o.contains(&x) {
            return x;
        }
    }
}

/// Residual is the largest `(x − y)²` over sampled point pairs, clipped at 0; spacelike pairs
/// have negative square.
pub fn cone_disjointness(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    vec![ctx.record(params! {}, 1e-12, || {
        let s = ctx.scale();
        let (mut pairs, mut worst): (usize, f64) = (0, 0.0);
        for _ in 0..ctx.samples() * 20 {
            if pairs == ctx.samples() {
                break;
            }
            let o1 = DoubleCone::new(vector(rng, 2.0 * s), rng.random_range(0.1..0.8) * s)?;
            let o2 = DoubleCone::new(vector(rng, 2.0 * s), rng.random_range(0.1..0.8) * s)?;
            if cones_causally_disjoint(&o1, &o2) != Tri::True {
                continue;
            }
            pairs += 1;
            for _ in 0..10 {
                let d = point_in(rng, &o1) - point_in(rng, &o2);
                worst = worst.max(d.square().max(0.0));
            }
        }
        Ok((pairs, worst))
    })]
}
