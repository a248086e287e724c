//! Palm-parallel drivers. Palms are processed in parallel and reduced in
//! palm order, so results and counters do not depend on the thread count.

use std::ops::ControlFlow;
use std::time::Instant;

use rayon::prelude::*;
use snapfix_core::cover::{CoverTolerance, Direction};
use snapfix_core::synth::{self, CandidateMap, Fixture, SynthStats};
use snapfix_core::{ExtrusionParams, Objective, Polyhedron, QualityMetrics, SynthesisResult};

use crate::error::{Error, Result};

pub struct Driver {
    pool: rayon::ThreadPool,
}

impl Driver {
    /// `threads = None` uses `SNAPFIX_THREADS` when set, otherwise one
    /// thread per core.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let threads = match threads {
            Some(n) => Some(n),
            None => match std::env::var("SNAPFIX_THREADS") {
                Ok(s) => Some(s.trim().parse().map_err(|_| Error::Config(format!("SNAPFIX_THREADS={s:?} is not a count")))?),
                Err(_) => None,
            },
        };
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(Error::Config("thread count must be positive".into()));
            }
            b = b.num_threads(n);
        }
        let pool = b.build().map_err(|e| Error::Config(e.to_string()))?;
        Ok(Driver { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Parallel form of [`synth::minimal_snapping_fixture`] with identical output.
    pub fn synthesize(&self, p: &Polyhedron, tol: CoverTolerance) -> SynthesisResult {
        let start = Instant::now();
        let map = synth::build_candidate_map(p);
        let mut stats = SynthStats::default();
        let block = 4 * self.threads();
        let mut found = None;
        'phases: for (phase, k) in [2usize, 3, 4].into_iter().enumerate() {
            let palms: Vec<usize> = (0..p.facet_count()).collect();
            for chunk in palms.chunks(block) {
                let results: Vec<(Option<(Fixture, _)>, u64)> = self.pool.install(|| {
                    chunk
                        .par_iter()
                        .map(|&palm| {
                            let mut calls = 0;
                            let r = synth::subphase_on_palm(p, &map, palm, k, tol, &mut calls);
                            (r, calls)
                        })
                        .collect()
                });
                for (r, calls) in results {
                    stats.palms_scanned += 1;
                    stats.valid_calls[phase] += calls;
                    if let Some(hit) = r {
                        found = Some(hit);
                        break 'phases;
                    }
                }
            }
        }
        stats.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        match found {
            Some((f, d)) => SynthesisResult { fixture: Some(f), serving_direction: Direction::new(d), stats },
            None => SynthesisResult { fixture: None, serving_direction: None, stats },
        }
    }

    /// Smallest finger count up to `max_fingers` and the number of fixtures
    /// with that count.
    pub fn minimal_count(&self, p: &Polyhedron, max_fingers: usize, tol: CoverTolerance) -> Option<(usize, u64)> {
        let map = synth::build_candidate_map(p);
        (1..=max_fingers.min(4)).find_map(|k| {
            let n = self.count_with(p, &map, k, tol);
            (n > 0).then_some((k, n))
        })
    }

    fn count_with(&self, p: &Polyhedron, map: &CandidateMap, k: usize, tol: CoverTolerance) -> u64 {
        self.pool.install(|| {
            (0..p.facet_count())
                .into_par_iter()
                .map(|palm| synth::count_palm_fixtures(p, map, palm, k, tol))
                .sum()
        })
    }

    /// Parallel form of [`synth::best_fixture`].
    pub fn best(
        &self,
        p: &Polyhedron,
        objective: Objective,
        params: &ExtrusionParams,
        tol: CoverTolerance,
    ) -> Result<Option<(Fixture, QualityMetrics)>> {
        let map = synth::build_candidate_map(p);
        for k in 2..=4 {
            let per_palm: Vec<Result<Option<(Fixture, QualityMetrics)>>> = self.pool.install(|| {
                (0..p.facet_count())
                    .into_par_iter()
                    .map(|palm| best_on_palm(p, &map, palm, k, objective, params, tol))
                    .collect()
            });
            let mut best: Option<(Fixture, QualityMetrics)> = None;
            for r in per_palm {
                if let Some((f, q)) = r? {
                    if best.as_ref().map_or(true, |(_, b)| q.value(objective) < b.value(objective)) {
                        best = Some((f, q));
                    }
                }
            }
            if best.is_some() {
                return Ok(best);
            }
        }
        Ok(None)
    }
}

fn best_on_palm(
    p: &Polyhedron,
    map: &CandidateMap,
    palm: usize,
    k: usize,
    objective: Objective,
    params: &ExtrusionParams,
    tol: CoverTolerance,
) -> Result<Option<(Fixture, QualityMetrics)>> {
    let mut best: Option<(Fixture, QualityMetrics)> = None;
    let mut err = None;
    let mut calls = 0;
    let _ = synth::for_each_palm_fixture(p, map, palm, k, tol, &mut calls, &mut |f, _| match synth::quality_of(p, &f, params) {
        Ok(q) => {
            if best.as_ref().map_or(true, |(_, b)| q.value(objective) < b.value(objective)) {
                best = Some((f, q));
            }
            if objective == Objective::Fingers {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        }
        Err(e) => {
            err = Some(e);
            ControlFlow::Break(())
        }
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(best),
    }
}
