//! Teleport-space geometry: destination adjustment along the travel ray,
//! range limits, room layout, and the proxemic correction policy.

use core::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::math::sqrt;

/// Ground-plane point in meters; the room center is the origin.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position2 {
    pub x: f64,
    pub y: f64,
}

impl Position2 {
    pub const ORIGIN: Position2 = Position2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        sqrt(self.dot(self))
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

impl Add for Position2 {
    type Output = Position2;
    fn add(self, rhs: Self) -> Self {
        Position2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Position2 {
    type Output = Position2;
    fn sub(self, rhs: Self) -> Self {
        Position2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Position2 {
    type Output = Position2;
    fn mul(self, k: f64) -> Self {
        Position2::new(self.x * k, self.y * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjustmentDirection {
    Forward,
    Backward,
}

impl AdjustmentDirection {
    pub const ALL: [AdjustmentDirection; 2] = [AdjustmentDirection::Forward, AdjustmentDirection::Backward];

    pub fn as_str(self) -> &'static str {
        match self {
            AdjustmentDirection::Forward => "forward",
            AdjustmentDirection::Backward => "backward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeKind {
    Small,
    Large,
}

impl RangeKind {
    pub const ALL: [RangeKind; 2] = [RangeKind::Small, RangeKind::Large];

    /// Distance from the room center to the center of each teleport zone.
    pub fn center_distance(self) -> f64 {
        match self {
            RangeKind::Small => 2.5,
            RangeKind::Large => 9.0,
        }
    }

    /// Largest adjustment the staircase may command in this range.
    pub fn max_adjustment(self) -> f64 {
        match self {
            RangeKind::Small => 2.5,
            RangeKind::Large => 3.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RangeKind::Small => "small",
            RangeKind::Large => "large",
        }
    }
}

pub const DEFAULT_ZONE_RADIUS: f64 = 0.5;
pub const WALL_CLEARANCE: f64 = 4.5;

/// Hall's interpersonal distance bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProxemicZone {
    Intimate,
    Personal,
    Social,
}

impl ProxemicZone {
    /// Distance at which the zone begins.
    pub fn inner_boundary(self) -> f64 {
        match self {
            ProxemicZone::Intimate => 0.0,
            ProxemicZone::Personal => 0.45,
            ProxemicZone::Social => 1.2,
        }
    }

    pub fn outer_boundary(self) -> f64 {
        match self {
            ProxemicZone::Intimate => 0.45,
            ProxemicZone::Personal => 1.2,
            ProxemicZone::Social => 3.6,
        }
    }

    /// Zone containing a separation distance, if any of the three does.
    pub fn classify(distance: f64) -> Option<ProxemicZone> {
        [ProxemicZone::Intimate, ProxemicZone::Personal, ProxemicZone::Social]
            .into_iter()
            .find(|z| distance >= z.inner_boundary() && distance < z.outer_boundary())
    }

    pub fn from_name(name: &str) -> Option<ProxemicZone> {
        match name {
            "intimate" => Some(ProxemicZone::Intimate),
            "personal" => Some(ProxemicZone::Personal),
            "social" => Some(ProxemicZone::Social),
            _ => None,
        }
    }
}

/// Destination after adjustment, with the magnitude actually applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adjustment {
    pub position: Position2,
    pub effective_magnitude: f64,
}

fn check_inputs(origin: Position2, selected: Position2, magnitude: f64) -> Result<(Position2, f64), GeometryError> {
    if !origin.is_finite() || !selected.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if !magnitude.is_finite() || magnitude < 0.0 {
        return Err(GeometryError::InvalidMagnitude(magnitude));
    }
    let ray = selected - origin;
    let length = ray.norm();
    if length == 0.0 {
        return Err(GeometryError::DegenerateDirection);
    }
    Ok((ray * (1.0 / length), length))
}

/// Moves `selected` along the origin→selected ray by `magnitude`.
///
/// Backward moves stop at the origin; the returned effective magnitude
/// reflects that clamp.
pub fn adjust_destination(
    origin: Position2,
    selected: Position2,
    direction: AdjustmentDirection,
    magnitude: f64,
) -> Result<Adjustment, GeometryError> {
    let (unit, length) = check_inputs(origin, selected, magnitude)?;
    let adjustment = match direction {
        AdjustmentDirection::Forward => Adjustment {
            position: selected + unit * magnitude,
            effective_magnitude: magnitude,
        },
        AdjustmentDirection::Backward if magnitude >= length => Adjustment {
            position: origin,
            effective_magnitude: length,
        },
        AdjustmentDirection::Backward => Adjustment {
            position: selected - unit * magnitude,
            effective_magnitude: magnitude,
        },
    };
    Ok(adjustment)
}

/// Caps a commanded magnitude by the range maximum and, for backward moves,
/// by the distance back to the origin.
pub fn clamp_magnitude(
    origin: Position2,
    selected: Position2,
    direction: AdjustmentDirection,
    magnitude: f64,
    range: RangeKind,
) -> f64 {
    let mut m = magnitude.max(0.0);
    if direction == AdjustmentDirection::Backward {
        m = m.min(selected.distance(origin));
    }
    m.min(range.max_adjustment())
}

/// Square room with four teleport zones on its diagonals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomLayout {
    pub range: RangeKind,
    pub side_length: f64,
    pub zone_radius: f64,
    pub zone_centers: [Position2; 4],
    pub wall_clearance: f64,
}

impl RoomLayout {
    pub fn for_range(range: RangeKind) -> RoomLayout {
        build_layout(range, DEFAULT_ZONE_RADIUS)
    }

    /// Distance from a zone's nearest edge to the nearest wall.
    pub fn zone_wall_gap(&self, zone: usize) -> f64 {
        let c = self.zone_centers[zone];
        let half = self.side_length / 2.0;
        (half - c.x.abs()).min(half - c.y.abs()) - self.zone_radius
    }
}

pub fn build_layout(range: RangeKind, zone_radius: f64) -> RoomLayout {
    let offset = range.center_distance() / core::f64::consts::SQRT_2;
    // counter-clockwise, so zone k+1 is zone k rotated by 90 degrees
    let zone_centers = [
        Position2::new(offset, offset),
        Position2::new(-offset, offset),
        Position2::new(-offset, -offset),
        Position2::new(offset, -offset),
    ];
    RoomLayout {
        range,
        side_length: 2.0 * (offset + zone_radius + WALL_CLEARANCE),
        zone_radius,
        zone_centers,
        wall_clearance: WALL_CLEARANCE,
    }
}

/// Outcome of the proxemic correction policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correction {
    pub position: Position2,
    pub magnitude: f64,
    /// Whether the target separation was reached within the budget.
    pub attained: bool,
}

/// Pushes a teleport backward just far enough to keep `partner` outside
/// `target`'s inner boundary, spending at most `backward_threshold`.
pub fn proxemic_correction(
    origin: Position2,
    selected: Position2,
    partner: Position2,
    backward_threshold: f64,
    target: ProxemicZone,
) -> Result<Correction, GeometryError> {
    let (unit, length) = check_inputs(origin, selected, backward_threshold)?;
    if !partner.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    let required = target.inner_boundary();
    let offset = selected - partner;
    let gap_sq = offset.dot(offset) - required * required;
    if gap_sq >= 0.0 {
        return Ok(Correction { position: selected, magnitude: 0.0, attained: true });
    }
    // |offset - unit*m|^2 >= required^2  <=>  m^2 - 2bm + gap_sq >= 0, and gap_sq < 0
    // leaves exactly one non-negative root.
    let b = unit.dot(offset);
    let needed = b + sqrt(b * b - gap_sq);
    let budget = backward_threshold.min(length);
    let (magnitude, attained) = if needed <= budget { (needed, true) } else { (budget, false) };
    let adjusted = adjust_destination(origin, selected, AdjustmentDirection::Backward, magnitude)?;
    Ok(Correction {
        position: adjusted.position,
        magnitude: adjusted.effective_magnitude,
        attained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const P: fn(f64, f64) -> Position2 = Position2::new;

    #[test]
    fn adjust_examples() {
        let a = adjust_destination(P(0.0, 0.0), P(2.5, 0.0), AdjustmentDirection::Backward, 1.0).unwrap();
        assert_eq!(a.position, P(1.5, 0.0));
        let a = adjust_destination(P(0.0, 0.0), P(0.0, 9.0), AdjustmentDirection::Forward, 0.98).unwrap();
        assert_abs_diff_eq!(a.position.y, 9.98, epsilon = 1e-12);
        assert_eq!(a.position.x, 0.0);
        let a = adjust_destination(P(0.0, 0.0), P(2.5, 0.0), AdjustmentDirection::Backward, 3.0).unwrap();
        assert_eq!(a.position, P(0.0, 0.0));
        assert_eq!(a.effective_magnitude, 2.5);
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let o = P(1.0, 1.0);
        assert_eq!(
            adjust_destination(o, o, AdjustmentDirection::Forward, 0.5),
            Err(GeometryError::DegenerateDirection)
        );
        assert_eq!(
            adjust_destination(o, P(2.0, 1.0), AdjustmentDirection::Forward, -0.1),
            Err(GeometryError::InvalidMagnitude(-0.1))
        );
        assert!(proxemic_correction(o, o, P(3.0, 3.0), 1.0, ProxemicZone::Personal).is_err());
    }

    #[test]
    fn clamp_examples() {
        let o = Position2::ORIGIN;
        assert_eq!(clamp_magnitude(o, P(2.5, 0.0), AdjustmentDirection::Backward, 4.0, RangeKind::Small), 2.5);
        assert_eq!(clamp_magnitude(o, P(9.0, 0.0), AdjustmentDirection::Forward, 5.0, RangeKind::Large), 3.5);
        assert_eq!(clamp_magnitude(o, P(9.0, 0.0), AdjustmentDirection::Backward, 0.0, RangeKind::Large), 0.0);
        // origin bound tighter than range cap
        assert_abs_diff_eq!(
            clamp_magnitude(o, P(2.1, 0.0), AdjustmentDirection::Backward, 2.4, RangeKind::Small),
            2.1
        );
    }

    #[test]
    fn layout_sides() {
        let small = RoomLayout::for_range(RangeKind::Small);
        let large = RoomLayout::for_range(RangeKind::Large);
        assert!((small.side_length - 13.54).abs() <= 0.01, "{}", small.side_length);
        assert!((large.side_length - 22.72).abs() <= 0.01, "{}", large.side_length);
        for layout in [&small, &large] {
            for (k, c) in layout.zone_centers.iter().enumerate() {
                assert_abs_diff_eq!(c.norm(), layout.range.center_distance(), epsilon = 1e-12);
                assert_abs_diff_eq!(layout.zone_wall_gap(k), WALL_CLEARANCE, epsilon = 1e-12);
                let next = layout.zone_centers[(k + 1) % 4];
                // 90 degree rotation: (x, y) -> (-y, x)
                assert_abs_diff_eq!(next.x, -c.y, epsilon = 1e-12);
                assert_abs_diff_eq!(next.y, c.x, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn one_meter_zone_radius_is_configurable() {
        let layout = build_layout(RangeKind::Small, 1.0);
        assert_abs_diff_eq!(layout.side_length, 13.54 + 1.0, epsilon = 0.01);
    }

    #[test]
    fn proxemic_examples() {
        let o = Position2::ORIGIN;
        let partner = P(2.7, 0.0);
        let c = proxemic_correction(o, P(2.5, 0.0), partner, 1.33, ProxemicZone::Personal).unwrap();
        assert!(c.attained);
        assert_abs_diff_eq!(c.magnitude, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(c.position.distance(partner), 0.45, epsilon = 1e-12);

        let c = proxemic_correction(o, P(2.5, 0.0), P(4.5, 0.0), 1.33, ProxemicZone::Personal).unwrap();
        assert_eq!(c.position, P(2.5, 0.0));
        assert_eq!(c.magnitude, 0.0);
        assert!(c.attained);
    }

    #[test]
    fn proxemic_best_effort_matches_brute_force() {
        let o = Position2::ORIGIN;
        let selected = P(2.5, 0.0);
        let partner = P(2.6, 0.0);
        // 1 mm grid search for any budget-respecting magnitude reaching the social boundary
        let reachable = (0..=750).any(|mm| {
            let m = mm as f64 / 1000.0;
            (selected - P(m, 0.0)).distance(partner) >= 1.2
        });
        assert!(!reachable);
        let c = proxemic_correction(o, selected, partner, 0.75, ProxemicZone::Social).unwrap();
        assert!(!c.attained);
        assert_abs_diff_eq!(c.magnitude, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(c.position.x, 1.75, epsilon = 1e-12);
    }

    #[test]
    fn proxemic_zero_budget() {
        let c = proxemic_correction(Position2::ORIGIN, P(2.5, 0.0), P(2.7, 0.0), 0.0, ProxemicZone::Personal).unwrap();
        assert!(!c.attained);
        assert_eq!(c.magnitude, 0.0);
        assert_eq!(c.position, P(2.5, 0.0));
    }

    #[test]
    fn classify_zones() {
        assert_eq!(ProxemicZone::classify(0.2), Some(ProxemicZone::Intimate));
        assert_eq!(ProxemicZone::classify(0.45), Some(ProxemicZone::Personal));
        assert_eq!(ProxemicZone::classify(2.0), Some(ProxemicZone::Social));
        assert_eq!(ProxemicZone::classify(4.0), None);
    }
}
