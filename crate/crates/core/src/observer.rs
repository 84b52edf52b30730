//! Simulated participants.
//!
//! Detection follows a cumulative-Gaussian psychometric function with a
//! false-alarm floor and a lapse ceiling:
//! `p(m) = gamma + (1 - gamma - lambda) * Phi((m - pse) / sigma)`.
//! Populations draw per-participant thresholds and trait scores through a
//! Gaussian copula so that selected trait/threshold pairs are correlated.

use alloc::string::String;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::condition::{Condition, ConditionMap};
use crate::error::{ObserverError, SessionError};
use crate::geometry::Position2;
use crate::math::{cholesky, normal_cdf, sqrt};
use crate::rng::SimRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverModel {
    pub pse: ConditionMap<f64>,
    pub slope_sigma: f64,
    pub false_alarm_gamma: f64,
    pub lapse_lambda: f64,
    pub vr_experience: u8,
    pub sbsod: f64,
    pub sot_error: f64,
}

impl ObserverModel {
    /// Observer with the same threshold in every condition and neutral traits.
    pub fn uniform(pse: f64, slope_sigma: f64, false_alarm_gamma: f64, lapse_lambda: f64) -> Self {
        ObserverModel {
            pse: ConditionMap::splat(pse),
            slope_sigma,
            false_alarm_gamma,
            lapse_lambda,
            vr_experience: 3,
            sbsod: 4.0,
            sot_error: 20.0,
        }
    }

    pub fn validate(&self) -> Result<(), ObserverError> {
        if !(self.slope_sigma > 0.0 && self.slope_sigma.is_finite()) {
            return Err(ObserverError::Invalid("slope_sigma must be positive"));
        }
        let (g, l) = (self.false_alarm_gamma, self.lapse_lambda);
        if !(g >= 0.0 && l >= 0.0 && g + l < 1.0) {
            return Err(ObserverError::Invalid("need gamma, lambda >= 0 and gamma + lambda < 1"));
        }
        if self.pse.0.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(ObserverError::Invalid("pse must be finite and non-negative"));
        }
        if !(1..=5).contains(&self.vr_experience) {
            return Err(ObserverError::Invalid("vr_experience must be in 1..=5"));
        }
        if !(1.0..=7.0).contains(&self.sbsod) {
            return Err(ObserverError::Invalid("sbsod must be in [1, 7]"));
        }
        Ok(())
    }

    pub fn detect_probability(&self, condition: Condition, magnitude: f64) -> f64 {
        let z = (magnitude - self.pse.get(condition)) / self.slope_sigma;
        self.false_alarm_gamma + (1.0 - self.false_alarm_gamma - self.lapse_lambda) * normal_cdf(z)
    }

    /// Stimulus level detected half of the time, found by bisection.
    pub fn fifty_percent_point(&self, condition: Condition) -> Option<f64> {
        let (g, l) = (self.false_alarm_gamma, self.lapse_lambda);
        if g >= 0.5 || 1.0 - l <= 0.5 {
            return None;
        }
        let pse = *self.pse.get(condition);
        let (mut lo, mut hi) = (pse - 50.0 * self.slope_sigma, pse + 50.0 * self.slope_sigma);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.detect_probability(condition, mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// What the responder is asked about after a teleport.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrialStimulus {
    Training,
    Catch,
    Adjusted { condition: Condition, magnitude: f64 },
}

/// Anything that can stand in for a participant during a block.
pub trait Responder {
    fn select_destination(&mut self, zone_center: Position2, zone_radius: f64, rng: &mut SimRng)
        -> Result<Position2, SessionError>;

    /// Returns `true` when the responder reports an adjustment ("no, I did
    /// not land where I selected").
    fn respond(&mut self, stimulus: TrialStimulus, rng: &mut SimRng) -> Result<bool, SessionError>;
}

/// Area-uniform draw from a disc.
pub fn select_destination<R: Rng + ?Sized>(zone_center: Position2, zone_radius: f64, rng: &mut R) -> Position2 {
    let r = zone_radius * sqrt(rng.random::<f64>());
    let theta = 2.0 * PI * rng.random::<f64>();
    zone_center + Position2::new(r * libm::cos(theta), r * libm::sin(theta))
}

pub fn respond<R: Rng + ?Sized>(model: &ObserverModel, stimulus: TrialStimulus, rng: &mut R) -> bool {
    let p = match stimulus {
        TrialStimulus::Training | TrialStimulus::Catch => model.false_alarm_gamma,
        TrialStimulus::Adjusted { condition, magnitude } => model.detect_probability(condition, magnitude),
    };
    rng.random::<f64>() < p
}

impl Responder for ObserverModel {
    fn select_destination(&mut self, zone_center: Position2, zone_radius: f64, rng: &mut SimRng)
        -> Result<Position2, SessionError> {
        if !(zone_radius > 0.0) {
            return Err(SessionError::Responder(String::from("zone radius must be positive")));
        }
        Ok(select_destination(zone_center, zone_radius, rng))
    }

    fn respond(&mut self, stimulus: TrialStimulus, rng: &mut SimRng) -> Result<bool, SessionError> {
        Ok(respond(self, stimulus, rng))
    }
}

/// Noise-free observer: detects exactly when the magnitude exceeds `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResponder {
    pub threshold: f64,
}

impl Responder for StepResponder {
    fn select_destination(&mut self, zone_center: Position2, zone_radius: f64, rng: &mut SimRng)
        -> Result<Position2, SessionError> {
        Ok(select_destination(zone_center, zone_radius, rng))
    }

    fn respond(&mut self, stimulus: TrialStimulus, _rng: &mut SimRng) -> Result<bool, SessionError> {
        Ok(match stimulus {
            TrialStimulus::Adjusted { magnitude, .. } => magnitude > self.threshold,
            _ => false,
        })
    }
}

/// Source of simulated participants.
pub trait ObserverPopulation {
    fn sample(&self, participant: u32, rng: &mut SimRng) -> Result<ObserverModel, ObserverError>;
}

/// Every participant is the same observer.
impl ObserverPopulation for ObserverModel {
    fn sample(&self, _participant: u32, _rng: &mut SimRng) -> Result<ObserverModel, ObserverError> {
        self.validate()?;
        Ok(self.clone())
    }
}

/// Participants cycle through a fixed roster by index.
impl ObserverPopulation for [ObserverModel] {
    fn sample(&self, participant: u32, _rng: &mut SimRng) -> Result<ObserverModel, ObserverError> {
        if self.is_empty() {
            return Err(ObserverError::Invalid("empty observer roster"));
        }
        let model = self[participant as usize % self.len()].clone();
        model.validate()?;
        Ok(model)
    }
}

/// Parameters of a between-subject observer population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PopulationParams {
    pub pse_means: ConditionMap<f64>,
    pub pse_sd: f64,
    /// Correlation between a participant's thresholds in different conditions.
    pub condition_correlation: f64,
    pub slope_sigma: f64,
    pub false_alarm_gamma: f64,
    pub lapse_lambda: f64,
    /// Latent correlation of SOT error with the backward-large threshold.
    pub sot_backward_large_correlation: f64,
    /// Latent correlation of VR experience with the backward-small threshold.
    pub vr_backward_small_correlation: f64,
    pub sot_mean: f64,
    pub sot_sd: f64,
    pub sbsod_mean: f64,
    pub sbsod_sd: f64,
    /// Latent cut points mapping the VR-experience factor onto 1..=5.
    pub vr_cutpoints: [f64; 4],
}

impl Default for PopulationParams {
    fn default() -> Self {
        PopulationParams {
            pse_means: ConditionMap([0.75, 0.98, 1.33, 1.64]),
            pse_sd: 0.4,
            condition_correlation: 0.5,
            slope_sigma: 0.3,
            false_alarm_gamma: 0.02,
            lapse_lambda: 0.02,
            sot_backward_large_correlation: 0.49,
            vr_backward_small_correlation: -0.49,
            sot_mean: 25.0,
            sot_sd: 12.0,
            sbsod_mean: 4.5,
            sbsod_sd: 1.0,
            // standard normal quintiles
            vr_cutpoints: [-0.841_621_233_572_914_3, -0.253_347_103_135_799_7, 0.253_347_103_135_799_7, 0.841_621_233_572_914_3],
        }
    }
}

const SOT: usize = 4;
const SBSOD: usize = 5;
const VR: usize = 6;
const DIM: usize = 7;

impl PopulationParams {
    /// Copula correlation matrix over (four thresholds, SOT, SBSOD, VR), row-major.
    pub fn correlation_matrix(&self) -> [f64; DIM * DIM] {
        let mut m = [0.0; DIM * DIM];
        for i in 0..DIM {
            m[i * DIM + i] = 1.0;
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m[i * DIM + j] = self.condition_correlation;
                }
            }
        }
        let mut set = |a: usize, b: usize, r: f64| {
            m[a * DIM + b] = r;
            m[b * DIM + a] = r;
        };
        set(Condition::ALL[3].index(), SOT, self.sot_backward_large_correlation);
        set(Condition::ALL[2].index(), VR, self.vr_backward_small_correlation);
        m
    }

    pub fn validate(&self) -> Result<(), ObserverError> {
        if !(self.pse_sd >= 0.0) || self.pse_means.0.iter().any(|m| !(*m >= 0.0)) {
            return Err(ObserverError::Invalid("pse means and sd must be non-negative"));
        }
        if !(self.sot_sd >= 0.0 && self.sbsod_sd >= 0.0) {
            return Err(ObserverError::Invalid("trait sds must be non-negative"));
        }
        if self.vr_cutpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ObserverError::Invalid("vr_cutpoints must be strictly increasing"));
        }
        let probe = ObserverModel::uniform(0.0, self.slope_sigma, self.false_alarm_gamma, self.lapse_lambda);
        probe.validate()?;
        cholesky(&self.correlation_matrix(), DIM).ok_or(ObserverError::NotPositiveDefinite)?;
        Ok(())
    }

    pub fn sample_observer<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ObserverModel, ObserverError> {
        self.validate()?;
        let l = cholesky(&self.correlation_matrix(), DIM).ok_or(ObserverError::NotPositiveDefinite)?;
        let mut e = [0.0; DIM];
        for v in e.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let mut z = [0.0; DIM];
        for i in 0..DIM {
            z[i] = (0..=i).map(|k| l[i * DIM + k] * e[k]).sum();
        }
        let mut pse = self.pse_means;
        for (i, p) in pse.0.iter_mut().enumerate() {
            *p = (*p + self.pse_sd * z[i]).max(0.0);
        }
        let vr = 1 + self.vr_cutpoints.iter().filter(|&&c| z[VR] > c).count() as u8;
        Ok(ObserverModel {
            pse,
            slope_sigma: self.slope_sigma,
            false_alarm_gamma: self.false_alarm_gamma,
            lapse_lambda: self.lapse_lambda,
            vr_experience: vr,
            sbsod: (self.sbsod_mean + self.sbsod_sd * z[SBSOD]).clamp(1.0, 7.0),
            sot_error: (self.sot_mean + self.sot_sd * z[SOT]).clamp(0.0, 180.0),
        })
    }
}

impl ObserverPopulation for PopulationParams {
    fn sample(&self, _participant: u32, rng: &mut SimRng) -> Result<ObserverModel, ObserverError> {
        self.sample_observer(rng)
    }
}

/// Population calibrated to the reported mean thresholds and trait correlations.
pub fn paper_population() -> PopulationParams {
    PopulationParams::default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AdjustmentDirection, RangeKind};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    const BL: Condition = Condition::new(AdjustmentDirection::Backward, RangeKind::Large);

    #[test]
    fn detect_probability_anchors() {
        let m = ObserverModel::uniform(1.0, 0.3, 0.0, 0.0);
        assert_abs_diff_eq!(m.detect_probability(BL, 1.0), 0.5, epsilon = 1e-15);
        let m = ObserverModel::uniform(3.0, 0.1, 0.07, 0.03);
        assert_abs_diff_eq!(m.detect_probability(BL, 0.0), 0.07, epsilon = 1e-12);
        assert_abs_diff_eq!(m.detect_probability(BL, 100.0), 0.97, epsilon = 1e-12);
    }

    #[test]
    fn detect_probability_is_monotone() {
        let m = ObserverModel::uniform(1.2, 0.25, 0.05, 0.02);
        let mut last = 0.0;
        for i in 0..=400 {
            let p = m.detect_probability(BL, i as f64 * 0.01);
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn fifty_percent_point_symmetric_rates_is_pse() {
        let m = ObserverModel::uniform(1.3, 0.3, 0.04, 0.04);
        assert_abs_diff_eq!(m.fifty_percent_point(BL).unwrap(), 1.3, epsilon = 1e-9);
        let m = ObserverModel::uniform(1.0, 0.3, 0.6, 0.0);
        assert!(m.fifty_percent_point(BL).is_none());
    }

    #[test]
    fn catch_responses_follow_gamma() {
        let mut rng = SimRng::seed_from_u64(3);
        let zero = ObserverModel::uniform(1.0, 0.3, 0.0, 0.0);
        assert!((0..1000).all(|_| !respond(&zero, TrialStimulus::Catch, &mut rng)));
        let half = ObserverModel::uniform(1.0, 0.3, 0.5, 0.0);
        let correct = (0..20_000).filter(|_| !respond(&half, TrialStimulus::Catch, &mut rng)).count();
        assert!((correct as f64 / 20_000.0 - 0.5).abs() < 0.015);
    }

    #[test]
    fn responses_at_pse_are_fair_coin() {
        let mut rng = SimRng::seed_from_u64(5);
        let m = ObserverModel::uniform(1.0, 0.3, 0.0, 0.0);
        let stim = TrialStimulus::Adjusted { condition: BL, magnitude: 1.0 };
        let hits = (0..10_000).filter(|_| respond(&m, stim, &mut rng)).count();
        assert!((hits as f64 / 10_000.0 - 0.5).abs() <= 0.015);
    }

    #[test]
    fn disc_sampling() {
        let mut rng = SimRng::seed_from_u64(9);
        let center = Position2::new(3.0, -2.0);
        let radius = 0.5;
        let n = 100_000;
        let (mut sx, mut sy, mut inner) = (0.0, 0.0, 0usize);
        for _ in 0..n {
            let p = select_destination(center, radius, &mut rng);
            let d = p.distance(center);
            assert!(d <= radius);
            if d <= radius / 2.0 {
                inner += 1;
            }
            sx += p.x;
            sy += p.y;
        }
        assert!((sx / n as f64 - center.x).abs() <= 0.01 * radius);
        assert!((sy / n as f64 - center.y).abs() <= 0.01 * radius);
        // (R/2)^2 / R^2
        assert!((inner as f64 / n as f64 - 0.25).abs() <= 0.01);
    }

    fn pearson(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
        sxy / (sxx * syy).sqrt()
    }

    #[test]
    fn default_population_moments() {
        let pop = paper_population();
        let mut rng = SimRng::seed_from_u64(2024);
        let samples: alloc::vec::Vec<ObserverModel> =
            (0..10_000).map(|_| pop.sample_observer(&mut rng).unwrap()).collect();
        for (c, &target) in pop.pse_means.iter() {
            let mean = samples.iter().map(|s| *s.pse.get(c)).sum::<f64>() / samples.len() as f64;
            assert!((mean - target).abs() <= 0.02, "{c:?}: {mean}");
        }
        assert!(samples.iter().all(|s| s.pse.0.iter().all(|&p| p >= 0.0)));
        let sot: alloc::vec::Vec<f64> = samples.iter().map(|s| s.sot_error).collect();
        let bl: alloc::vec::Vec<f64> = samples.iter().map(|s| *s.pse.get(BL)).collect();
        let r = pearson(&sot, &bl);
        assert!((r - 0.49).abs() <= 0.05, "{r}");
        assert!(samples.iter().all(|s| s.validate().is_ok()));
    }

    #[test]
    fn indefinite_copula_rejected() {
        let pop = PopulationParams { condition_correlation: 0.0, sot_backward_large_correlation: 1.2, ..paper_population() };
        assert_eq!(pop.validate(), Err(ObserverError::NotPositiveDefinite));
    }
}
