use super::{DialCompletion, DialObj, ExCompletion, ExObj, UnCompletion, UnObj};
use crate::doctrine::{equivalent, Doctrine};
use crate::error::Result;
use crate::finbase::FinSet;
use crate::report::{Report, Sweep, Window};

/// `(I, U, X, α) ↦ (I, U, (I × U, X, α))`.
pub fn dial_to_exun<E: Clone>(e: &DialObj<E>) -> ExObj<UnObj<E>> {
    ExObj {
        ctx: e.ctx,
        aux: e.witness,
        body: UnObj { ctx: e.ctx.times(e.witness), aux: e.counter, body: e.body.clone() },
    }
}

fn exun_to_dial<E: Clone>(e: &ExObj<UnObj<E>>) -> DialObj<E> {
    DialObj { ctx: e.ctx, witness: e.aux, counter: e.body.aux, body: e.body.body.clone() }
}

/// Compares `Dial(P)` with `(P^∀)^∃` fiberwise through `dial_to_exun`:
/// the map must reflect and preserve the order and hit every class.
pub fn dial_iso_check<P: Doctrine + Clone>(inner: &P, window: &Window) -> Result<Report> {
    let dial = DialCompletion::new(inner.clone());
    let exun = ExCompletion::new(UnCompletion::new(inner.clone()));
    let mut sweep = Sweep::new(format!("dial-iso({})", inner.name()), window);
    let top = inner.max_object().map_or(window.bound, |m| m.min(window.bound));
    for i in (0..=top).map(FinSet) {
        let source = dial.fiber(i)?;
        let image: Vec<_> = source.iter().map(dial_to_exun).collect();
        for (x, fx) in source.iter().zip(&image) {
            for (y, fy) in source.iter().zip(&image) {
                sweep.case("order-isomorphism", || format!("I={} x={x} y={y}", i.0), || {
                    let (d, e) = (dial.leq(i, x, y)?, exun.leq(i, fx, fy)?);
                    Ok((d != e).then(|| format!("Dial says {d}, ex(un) says {e}")))
                });
            }
        }
        for e in exun.fiber(i)? {
            sweep.case("surjective", || format!("I={} e={e}", i.0), || {
                let back = dial_to_exun(&exun_to_dial(&e));
                Ok((!equivalent(&exun, i, &back, &e)?).then(|| "no preimage".to_string()))
            });
        }
        sweep.report_mut().datum(format!("fiber over {}", i.0), source.len());
    }
    Ok(sweep.finish())
}
