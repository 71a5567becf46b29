use std::collections::BTreeMap;

/// One estimate of `P(accepted ∧ effective weight = w)` at one `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub epsilon: f64,
    pub probability: f64,
    /// 95% interval around `probability`, if known.
    pub ci: Option<(f64, f64)>,
    pub weight: usize,
}

impl ScalingPoint {
    pub fn new(epsilon: f64, probability: f64, weight: usize) -> Self {
        ScalingPoint {
            epsilon,
            probability,
            ci: None,
            weight,
        }
    }
}

/// Power-law fit `P = a · ε^s` for one residual weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFit {
    pub weight: usize,
    pub points: Vec<ScalingPoint>,
    /// `None` when fewer than two distinct `ε` carry nonzero estimates.
    pub exponent: Option<f64>,
    pub prefactor: Option<f64>,
}

impl WeightFit {
    /// The fitted exponent rounds to an order below the weight, i.e. errors
    /// of this weight arrive earlier than independent failures would allow.
    /// Rounding absorbs the sub-leading terms that pull finite-ε slopes
    /// slightly under their asymptotic value.
    pub fn correlated(&self) -> bool {
        self.exponent
            .is_some_and(|s| s.round() < self.weight as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalingReport {
    pub fits: BTreeMap<usize, WeightFit>,
}

impl ScalingReport {
    pub fn get(&self, weight: usize) -> Option<&WeightFit> {
        self.fits.get(&weight)
    }

    pub fn exponent(&self, weight: usize) -> Option<f64> {
        self.get(weight).and_then(|f| f.exponent)
    }
}

/// Least-squares fit of `ln P` against `ln ε` for every weight present.
pub fn fit_scaling(points: &[ScalingPoint]) -> ScalingReport {
    let mut by_weight: BTreeMap<usize, Vec<ScalingPoint>> = BTreeMap::new();
    for p in points {
        by_weight.entry(p.weight).or_default().push(p.clone());
    }
    let fits = by_weight
        .into_iter()
        .map(|(weight, mut pts)| {
            pts.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
            let usable: Vec<(f64, f64)> = pts
                .iter()
                .filter(|p| p.probability > 0.0 && p.epsilon > 0.0)
                .map(|p| (p.epsilon.ln(), p.probability.ln()))
                .collect();
            let (exponent, prefactor) = match least_squares(&usable) {
                Some((slope, intercept)) => (Some(slope), Some(intercept.exp())),
                None => (None, None),
            };
            let fit = WeightFit {
                weight,
                points: pts,
                exponent,
                prefactor,
            };
            (weight, fit)
        })
        .collect();
    ScalingReport { fits }
}

fn least_squares(xy: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if xy.len() < 2 || sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
