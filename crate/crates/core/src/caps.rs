//! Process-wide size caps. The CLI overrides them from `--caps`; library code
//! reads them at the point where an enumeration or materialization may blow up.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest quantale accepted from input files.
    pub max_quantale: usize,
    /// Largest V-category accepted from input files.
    pub max_objects: usize,
    /// Largest number of presheaves an enumeration may produce.
    pub max_presheaves: usize,
    /// Largest presheaf space whose full hom matrix may be materialized.
    pub max_materialize: usize,
    /// Largest number of candidate maps a functor enumeration may visit.
    pub max_functor_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_quantale: 8,
            max_objects: 16,
            max_presheaves: 2_000_000,
            max_materialize: 6_000,
            max_functor_nodes: 20_000_000,
        }
    }
}

static QUANTALE: AtomicUsize = AtomicUsize::new(8);
static OBJECTS: AtomicUsize = AtomicUsize::new(16);
static PRESHEAVES: AtomicUsize = AtomicUsize::new(2_000_000);
static MATERIALIZE: AtomicUsize = AtomicUsize::new(6_000);
static FUNCTOR_NODES: AtomicUsize = AtomicUsize::new(20_000_000);

pub fn current() -> Caps {
    Caps {
        max_quantale: QUANTALE.load(Ordering::Relaxed),
        max_objects: OBJECTS.load(Ordering::Relaxed),
        max_presheaves: PRESHEAVES.load(Ordering::Relaxed),
        max_materialize: MATERIALIZE.load(Ordering::Relaxed),
        max_functor_nodes: FUNCTOR_NODES.load(Ordering::Relaxed),
    }
}

pub fn set(c: Caps) {
    QUANTALE.store(c.max_quantale, Ordering::Relaxed);
    OBJECTS.store(c.max_objects, Ordering::Relaxed);
    PRESHEAVES.store(c.max_presheaves, Ordering::Relaxed);
    MATERIALIZE.store(c.max_materialize, Ordering::Relaxed);
    FUNCTOR_NODES.store(c.max_functor_nodes, Ordering::Relaxed);
}

pub(crate) fn guard(what: &str, needed: usize, cap: usize) -> Result<()> {
    if needed > cap {
        return Err(Error::SizeExceeded { what: what.to_string(), needed, cap });
    }
    Ok(())
}
