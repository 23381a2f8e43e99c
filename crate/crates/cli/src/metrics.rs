//! Recovery metrics for step-path estimates: change-point location error
//! and plateau-level relative error against a segmented truth path.
//!
//! The truth paths here are exact step functions, so segments come straight
//! from their `(first step, level)` tables; the estimate is scored with a
//! least-squares single change-point detector per jump and trimmed means
//! per plateau.

use serde::Serialize;

use epitv_core::Scalar;

/// Score of one change point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChangePointMetric {
    pub truth_step: usize,
    pub estimated_step: usize,
    pub location_error: usize,
}

/// Score of one plateau.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlateauMetric {
    pub truth_level: Scalar,
    pub estimated_level: Scalar,
    pub relative_error: Scalar,
}

/// Full score of one estimated path against its segmented truth.
#[derive(Debug, Clone, Serialize)]
pub struct PathRecovery {
    pub change_points: Vec<ChangePointMetric>,
    pub plateaus: Vec<PlateauMetric>,
}

impl PathRecovery {
    pub fn passes(&self, max_location_error: usize, max_relative_error: Scalar) -> bool {
        self.change_points
            .iter()
            .all(|cp| cp.location_error <= max_location_error)
            && self
                .plateaus
                .iter()
                .all(|p| p.relative_error.abs() <= max_relative_error)
    }
}

/// Least-squares single change point of `values[lo..hi]`: the split index
/// minimizing the two-level residual, found via prefix sums.
pub fn change_point(values: &[Scalar], lo: usize, hi: usize) -> usize {
    assert!(lo + 1 < hi && hi <= values.len(), "window needs two cells");
    let seg = &values[lo..hi];
    let n = seg.len();
    let mut prefix = vec![0.0; n + 1];
    let mut prefix2 = vec![0.0; n + 1];
    for (j, &v) in seg.iter().enumerate() {
        prefix[j + 1] = prefix[j] + v;
        prefix2[j + 1] = prefix2[j] + v * v;
    }
    let sse = |a: usize, b: usize| -> Scalar {
        let len = (b - a) as Scalar;
        let sum = prefix[b] - prefix[a];
        prefix2[b] - prefix2[a] - sum * sum / len
    };
    let mut best = (Scalar::INFINITY, 1);
    for c in 1..n {
        let total = sse(0, c) + sse(c, n);
        if total < best.0 {
            best = (total, c);
        }
    }
    lo + best.1
}

/// Mean of the inner half of `values[start..end]` (a quarter trimmed from
/// each side), so jump smearing at the edges does not contaminate the level.
pub fn plateau_level(values: &[Scalar], start: usize, end: usize) -> Scalar {
    let quarter = (end - start) / 4;
    let inner = &values[start + quarter..end - quarter];
    inner.iter().sum::<Scalar>() / inner.len() as Scalar
}

/// Score an estimated per-step path against truth segments given as
/// `(first step, level)`.
pub fn score_path(estimate: &[Scalar], segments: &[(usize, Scalar)]) -> PathRecovery {
    let n = estimate.len();
    let bounds: Vec<usize> = segments.iter().map(|s| s.0).chain([n]).collect();
    let mut change_points = Vec::new();
    for j in 1..segments.len() {
        let truth_step = segments[j].0;
        // search from the midpoint of the left segment to the midpoint of
        // the right one
        let lo = (bounds[j - 1] + bounds[j]) / 2;
        let hi = ((bounds[j] + bounds[j + 1]) / 2 + 1).min(n);
        let estimated_step = change_point(estimate, lo, hi);
        change_points.push(ChangePointMetric {
            truth_step,
            estimated_step,
            location_error: estimated_step.abs_diff(truth_step),
        });
    }
    let plateaus = (0..segments.len())
        .map(|j| {
            let estimated_level = plateau_level(estimate, bounds[j], bounds[j + 1]);
            let truth_level = segments[j].1;
            PlateauMetric {
                truth_level,
                estimated_level,
                relative_error: (estimated_level - truth_level) / truth_level,
            }
        })
        .collect();
    PathRecovery {
        change_points,
        plateaus,
    }
}

/// Relative error of a scalar estimate.
pub fn relative_error(estimate: Scalar, truth: Scalar) -> Scalar {
    (estimate - truth) / truth
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn change_point_finds_a_clean_step() {
        let mut v = vec![1.0; 40];
        for x in &mut v[23..] {
            *x = 2.0;
        }
        assert_eq!(change_point(&v, 10, 35), 23);
    }

    #[test]
    fn change_point_tolerates_noise() {
        let v: Vec<f64> = (0..40)
            .map(|j| {
                let base = if j < 17 { 1.0 } else { 3.0 };
                base + 0.2 * ((j * 37 % 11) as f64 / 11.0 - 0.5)
            })
            .collect();
        assert_eq!(change_point(&v, 5, 30), 17);
    }

    #[test]
    fn exact_step_path_scores_perfectly() {
        let segments = [(0usize, 0.16), (30, 0.26), (50, 0.15)];
        let mut path = vec![0.16; 100];
        for v in &mut path[30..50] {
            *v = 0.26;
        }
        for v in &mut path[50..] {
            *v = 0.15;
        }
        let score = score_path(&path, &segments);
        for cp in &score.change_points {
            assert_eq!(cp.location_error, 0);
        }
        for p in &score.plateaus {
            assert!(p.relative_error.abs() < 1e-12);
        }
        assert!(score.passes(5, 0.15));
    }

    #[test]
    fn shifted_levels_fail_the_tolerance() {
        let segments = [(0usize, 0.16), (30, 0.26), (50, 0.15)];
        let mut path = vec![0.16; 100];
        for v in &mut path[30..50] {
            *v = 0.26;
        }
        for v in &mut path[50..] {
            *v = 0.20; // +33%
        }
        let score = score_path(&path, &segments);
        assert!(!score.passes(5, 0.15));
    }
}
