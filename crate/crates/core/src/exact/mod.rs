//! Exact rational sequences and truncated power series.

pub mod known;
pub mod sequences;
pub mod series;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Rational;

use crate::error::Result;

pub use known::{named_series, ps_from_known, Known, NamedSeries};
pub use sequences::{seq, seq_closed_form_check, seq_table, SequenceId};
pub use series::{ps_div, ps_log, ps_mul, PowerSeries};

/// `num/den`, always with a denominator.
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

type Cache = Mutex<HashMap<String, Arc<PowerSeries>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Series memoised by key; a cached higher order serves lower requests.
pub(crate) fn cached(
    key: &str,
    order: usize,
    build: impl FnOnce() -> Result<PowerSeries>,
) -> Result<Arc<PowerSeries>> {
    if let Some(s) = cache().lock().unwrap().get(key) {
        if s.order() == order {
            return Ok(s.clone());
        }
        if s.order() > order {
            return Ok(Arc::new(s.truncate(order)));
        }
    }
    let s = Arc::new(build()?);
    let mut map = cache().lock().unwrap();
    let keep = map.get(key).is_none_or(|old| old.order() < s.order());
    if keep {
        map.insert(key.to_string(), s.clone());
    }
    Ok(s)
}
