use causal_loops::geometry::{DoubleCone, PoincareElement, Tri};
use causal_loops::loopgroup::{is_local, Letter, Word};
use causal_loops::simplex::{AffineSimplex, TestFunctionTag};
use rand::Rng;

use super::{hausdorff, params, Ctx};
use crate::report::Record;
use crate::sample::{poincare, segment, vector, Rng64};

const EXACT: f64 = 0.5;

/// Leftmost-first rescan on symbols: `2i` and `2i+1` cancel, `6` is degenerate.
fn oracle(w: &[usize]) -> Vec<usize> {
    let mut w = w.to_vec();
    'outer: loop {
        for i in 0..w.len() {
            if w[i] == 6 {
                w.remove(i);
                continue 'outer;
            }
            if i + 1 < w.len() && w[i] < 6 && w[i] ^ 1 == w[i + 1] {
                w.drain(i..i + 2);
                continue 'outer;
            }
        }
        return w;
    }
}

/// Three segments, their inverses (as opposite simplices) and one degenerate letter.
fn alphabet(
    rng: &mut Rng64,
    scale: f64,
    tag: &TestFunctionTag,
) -> causal_loops::Result<Vec<Letter>> {
    let mut out = Vec::new();
    for _ in 0..3 {
        let s = segment(rng, scale, tag);
        out.push(Letter::new(s.clone())?);
        out.push(Letter::new(s.opposite()?)?);
    }
    let v = vector(rng, scale);
    out.push(Letter::new(AffineSimplex::new(vec![v, v], tag.clone())?)?);
    Ok(out)
}

pub fn word_reduction(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    ctx.tags()
        .map(|(label, tag)| {
            ctx.record(params! {"tag" => label}, EXACT, || {
                let letters = alphabet(rng, ctx.scale(), tag)?;
                let mut failures = 0;
                for _ in 0..ctx.samples() {
                    let symbols: Vec<usize> = (0..rng.random_range(0..=10))
                        .map(|_| rng.random_range(0..7))
                        .collect();
                    let w =
                        Word::from_letters(symbols.iter().map(|&s| letters[s].clone()).collect());
                    let expect: Vec<Letter> = oracle(&symbols)
                        .into_iter()
                        .map(|s| letters[s].clone())
                        .collect();
                    if w.reduce().letters() != expect.as_slice() {
                        failures += 1;
                    }
                }
                Ok((ctx.samples(), failures as f64))
            })
        })
        .collect()
}

fn random_word(
    rng: &mut Rng64,
    max_len: usize,
    scale: f64,
    tag: &TestFunctionTag,
) -> causal_loops::Result<Word> {
    let letters = (0..rng.random_range(0..=max_len))
        .map(|_| Letter::from_parts(segment(rng, scale, tag), rng.random_bool(0.5)))
        .collect::<causal_loops::Result<Vec<_>>>()?;
    Ok(Word::from_letters(letters))
}

pub fn word_inverse(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    ctx.tags()
        .map(|(label, tag)| {
            ctx.record(params! {"tag" => label}, EXACT, || {
                let mut failures = 0;
                for _ in 0..ctx.samples() {
                    let w = random_word(rng, 12, ctx.scale(), tag)?;
                    if !w.then(&w.inverse()).reduce().is_empty() {
                        failures += 1;
                    }
                }
                Ok((ctx.samples(), failures as f64))
            })
        })
        .collect()
}

pub fn support_covariance(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
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
                        let w = random_word(rng, 6, ctx.scale(), tag)?;
                        let moved = w.poincare_act(&g).support();
                        let expect: Vec<_> =
                            w.support().iter().map(|b| b.transformed(&g)).collect();
                        if moved.len() != expect.len() {
                            worst = worst.max(1.0);
                            continue;
                        }
                        for b in &moved {
                            let size = b
                                .hull
                                .iter()
                                .map(|v| v.euclidean_norm())
                                .fold(1.0, f64::max);
                            let best = expect
                                .iter()
                                .map(|e| hausdorff(&b.hull, &e.hull))
                                .fold(f64::INFINITY, f64::min);
                            worst = worst.max(best / size);
                        }
                    }
                    Ok((p.count, worst))
                },
            )
        })
        .collect()
}

/// Counts words local in `O` whose image is not local in `PO` under a translation, or is
/// certified nonlocal under a general `P` (boosts inflate supports, so only "not False" holds).
pub fn locality_covariance(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let p = ctx.cfg.poincare;
    ctx.tags()
        .map(|(label, tag)| {
            ctx.record(
                params! {"tag" => label, "max_rapidity" => p.max_rapidity},
                EXACT,
                || {
                    let s = ctx.scale();
                    let (mut local, mut failures) = (0, 0);
                    for _ in 0..ctx.samples() {
                        let o =
                            DoubleCone::new(vector(rng, 0.5 * s), rng.random_range(2.0..5.0) * s)?;
                        let w = random_word(rng, 5, s, tag)?;
                        if is_local(&w, &o) != Tri::True {
                            continue;
                        }
                        local += 1;
                        let t = PoincareElement::translation(vector(rng, 3.0 * s));
                        let g = poincare(rng, p.max_rapidity, s);
                        if is_local(&w.poincare_act(&t), &o.transformed(&t)) != Tri::True
                            || is_local(&w.poincare_act(&g), &o.transformed(&g)) == Tri::False
                        {
                            failures += 1;
                        }
                    }
                    Ok((local, failures as f64))
                },
            )
        })
        .collect()
}
