//! Work counters that record which expensive phases actually ran.

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Default)]
pub struct WorkCounters {
    singular: AtomicU64,
    near_entries: AtomicU64,
    precorrections: AtomicU64,
    ffts: AtomicU64,
}

/// Plain-value copy of [`WorkCounters`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CounterSnapshot {
    /// Triangle-pair integrations that used singularity extraction.
    pub singular_integration_calls: u64,
    /// Basis-pair entries obtained by direct near-region integration.
    pub near_entry_direct_integrations: u64,
    /// Precorrection matrices built.
    pub precorrection_builds: u64,
    /// Grid convolutions applied (one per forward/inverse transform pair).
    pub fft_applications: u64,
}

impl CounterSnapshot {
    /// Per-field difference `self - earlier`.
    pub fn since(&self, earlier: &Self) -> Self {
        Self {
            singular_integration_calls: self.singular_integration_calls - earlier.singular_integration_calls,
            near_entry_direct_integrations: self.near_entry_direct_integrations
                - earlier.near_entry_direct_integrations,
            precorrection_builds: self.precorrection_builds - earlier.precorrection_builds,
            fft_applications: self.fft_applications - earlier.fft_applications,
        }
    }
}

impl WorkCounters {
    pub fn add_singular(&self, n: u64) {
        self.singular.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_near_entries(&self, n: u64) {
        self.near_entries.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_precorrection(&self) {
        self.precorrections.fetch_add(1, Ordering::Relaxed);
    }

    pub fn add_fft(&self, n: u64) {
        self.ffts.fetch_add(n, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            singular_integration_calls: self.singular.load(Ordering::Relaxed),
            near_entry_direct_integrations: self.near_entries.load(Ordering::Relaxed),
            precorrection_builds: self.precorrections.load(Ordering::Relaxed),
            fft_applications: self.ffts.load(Ordering::Relaxed),
        }
    }
}
