//! Lake geometry, wind, points of sail and leg costs.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::SeededRng;

/// One of eight compass directions, numbered clockwise from north.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction(u8);

impl Direction {
    pub const N: Direction = Direction(0);
    pub const NE: Direction = Direction(1);
    pub const E: Direction = Direction(2);
    pub const SE: Direction = Direction(3);
    pub const S: Direction = Direction(4);
    pub const SW: Direction = Direction(5);
    pub const W: Direction = Direction(6);
    pub const NW: Direction = Direction(7);

    pub const ALL: [Direction; 8] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
        Direction(6),
        Direction(7),
    ];

    pub fn new(index: u8) -> Result<Self> {
        if index < 8 {
            Ok(Direction(index))
        } else {
            Err(Error::InvalidArgument(format!("direction index {index} not in 0..8")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// `(dx, dy)` with north = `+y` and east = `+x`.
    pub fn offset(self) -> (i32, i32) {
        const OFFSETS: [(i32, i32); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];
        OFFSETS[self.0 as usize]
    }

    pub fn is_diagonal(self) -> bool {
        self.0 % 2 == 1
    }

    /// Euclidean length of a one-square move in this direction.
    pub fn leg_length(self) -> f64 {
        if self.is_diagonal() {
            std::f64::consts::SQRT_2
        } else {
            1.0
        }
    }

    /// Rotates by `ticks` eighths of a turn, clockwise for positive values.
    pub fn rotate(self, ticks: i32) -> Direction {
        Direction((self.0 as i32 + ticks).rem_euclid(8) as u8)
    }

    pub fn opposite(self) -> Direction {
        self.rotate(4)
    }

    /// Signed tick difference `self − other` folded into `−3..=4`.
    pub fn ticks_from(self, other: Direction) -> i32 {
        let d = (self.0 as i32 - other.0 as i32).rem_euclid(8);
        if d > 4 {
            d - 8
        } else {
            d
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 8] = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"];
        f.write_str(NAMES[self.0 as usize])
    }
}

/// Heading relative to the wind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointOfSail {
    Away,
    Down,
    Cross,
    Up,
    Into,
}

/// Side the wind comes over; `Unset` before the first leg and after a
/// dead-downwind leg, where the boat-wind angle has no sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tack {
    Unset,
    Port,
    Starboard,
}

impl Tack {
    pub fn index(self) -> usize {
        match self {
            Tack::Unset => 0,
            Tack::Port => 1,
            Tack::Starboard => 2,
        }
    }

    pub const ALL: [Tack; 3] = [Tack::Unset, Tack::Port, Tack::Starboard];
}

impl fmt::Display for Tack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tack::Unset => "-",
            Tack::Port => "port",
            Tack::Starboard => "starboard",
        })
    }
}

/// Point of sail and tack of `heading` under wind blowing towards `wind`.
///
/// The tick difference `δ = heading − wind` in `−3..=4` gives the point of
/// sail through `|δ|` (0 away, 1 down, 2 cross, 3 up, 4 into). A heading
/// clockwise of the wind (`δ > 0`) puts the wind over the starboard side.
pub fn relative_point_of_sail(heading: Direction, wind: Direction) -> (PointOfSail, Tack) {
    let delta = heading.ticks_from(wind);
    let point = match delta.abs() {
        0 => PointOfSail::Away,
        1 => PointOfSail::Down,
        2 => PointOfSail::Cross,
        3 => PointOfSail::Up,
        _ => PointOfSail::Into,
    };
    let tack = match delta {
        0 | 4 => Tack::Unset,
        d if d > 0 => Tack::Starboard,
        _ => Tack::Port,
    };
    (point, tack)
}

/// Unit-distance costs per point of sail and the flat tacking delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub into: f64,
    pub up: f64,
    pub cross: f64,
    pub down: f64,
    pub away: f64,
    pub delay: f64,
}

impl Default for CostTable {
    fn default() -> Self {
        Self {
            into: f64::INFINITY,
            up: 4.0,
            cross: 3.0,
            down: 2.0,
            away: 1.0,
            delay: 4.0,
        }
    }
}

impl CostTable {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.up, self.cross, self.down, self.away, self.delay];
        if finite.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidArgument(format!("invalid cost table {self:?}")));
        }
        if !(self.away <= self.down && self.down <= self.cross && self.cross <= self.up) {
            return Err(Error::InvalidArgument("costs must satisfy away ≤ down ≤ cross ≤ up".into()));
        }
        if self.into != f64::INFINITY {
            return Err(Error::InvalidArgument("into-wind cost must be infinite".into()));
        }
        Ok(())
    }

    pub fn unit_cost(&self, point: PointOfSail) -> f64 {
        match point {
            PointOfSail::Into => self.into,
            PointOfSail::Up => self.up,
            PointOfSail::Cross => self.cross,
            PointOfSail::Down => self.down,
            PointOfSail::Away => self.away,
        }
    }
}

/// Wind random walk: per step, keep direction or rotate one tick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindModel {
    pub p_same: f64,
    /// Counterclockwise.
    pub p_left: f64,
    /// Clockwise.
    pub p_right: f64,
}

impl Default for WindModel {
    fn default() -> Self {
        Self {
            p_same: 0.4,
            p_left: 0.3,
            p_right: 0.3,
        }
    }
}

/// Wind change chosen by the wind "agent" in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WindShift {
    Same,
    Left,
    Right,
}

impl WindShift {
    pub fn ticks(self) -> i32 {
        match self {
            WindShift::Same => 0,
            WindShift::Left => -1,
            WindShift::Right => 1,
        }
    }
}

impl WindModel {
    pub fn new(p_same: f64, p_left: f64, p_right: f64) -> Result<Self> {
        let m = Self { p_same, p_left, p_right };
        let ps = [p_same, p_left, p_right];
        if ps.iter().any(|p| !(0.0..=1.0).contains(p)) || (ps.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("invalid wind probabilities {ps:?}")));
        }
        Ok(m)
    }

    pub fn sample_shift(&self, rng: &mut SeededRng) -> WindShift {
        let u: f64 = rng.random();
        if u < self.p_same {
            WindShift::Same
        } else if u < self.p_same + self.p_left {
            WindShift::Left
        } else {
            WindShift::Right
        }
    }

    /// `(shift, probability)` pairs.
    pub fn shifts(&self) -> [(WindShift, f64); 3] {
        [
            (WindShift::Same, self.p_same),
            (WindShift::Left, self.p_left),
            (WindShift::Right, self.p_right),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Position {
    pub x: i32,
    pub y: i32,
}

impl Position {
    pub fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn step(self, heading: Direction) -> Position {
        let (dx, dy) = heading.offset();
        Position::new(self.x + dx, self.y + dy)
    }

    pub fn squared_distance(self, other: Position) -> i64 {
        let dx = (self.x - other.x) as i64;
        let dy = (self.y - other.y) as i64;
        dx * dx + dy * dy
    }

    pub fn distance(self, other: Position) -> f64 {
        (self.squared_distance(other) as f64).sqrt()
    }
}

/// Square lake; the boat sails from the south-west corner to the north-east one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LakeSpec {
    pub size: u32,
}

impl LakeSpec {
    pub fn new(size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidArgument(format!("lake size {size} < 2")));
        }
        Ok(Self { size })
    }

    pub fn start(&self) -> Position {
        Position::new(0, 0)
    }

    pub fn goal(&self) -> Position {
        let n = self.size as i32 - 1;
        Position::new(n, n)
    }

    pub fn contains(&self, p: Position) -> bool {
        let n = self.size as i32;
        (0..n).contains(&p.x) && (0..n).contains(&p.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SailingState {
    pub position: Position,
    /// Direction the wind blows towards.
    pub wind: Direction,
    pub tack: Tack,
}

impl fmt::Display for SailingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.position.x, self.position.y, self.wind, self.tack)
    }
}

/// Lake, wind and cost parameters of one sailing problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SailingWorld {
    pub lake: LakeSpec,
    pub wind: WindModel,
    pub costs: CostTable,
}

impl SailingWorld {
    pub fn new(size: u32) -> Result<Self> {
        Ok(Self {
            lake: LakeSpec::new(size)?,
            wind: WindModel::default(),
            costs: CostTable::default(),
        })
    }

    pub fn is_goal(&self, s: &SailingState) -> bool {
        s.position == self.lake.goal()
    }

    /// Cost of sailing one leg and the tack afterwards.
    ///
    /// The cost is the unit cost of the point of sail times the leg length
    /// (`√2` on diagonals), plus the tacking delay when the boat switches
    /// between port and starboard. A dead-downwind leg leaves the tack unset,
    /// so the leg after it never pays the delay.
    pub fn leg_cost(&self, s: &SailingState, heading: Direction) -> Result<(f64, Tack)> {
        let (point, tack) = relative_point_of_sail(heading, s.wind);
        if point == PointOfSail::Into {
            return Err(Error::InfeasibleLeg(format!("{heading} is into the wind in state {s}")));
        }
        if !self.lake.contains(s.position.step(heading)) {
            return Err(Error::InfeasibleLeg(format!("{heading} leaves the lake from state {s}")));
        }
        let flips = matches!(
            (s.tack, tack),
            (Tack::Port, Tack::Starboard) | (Tack::Starboard, Tack::Port)
        );
        let cost = self.costs.unit_cost(point) * heading.leg_length() + if flips { self.costs.delay } else { 0.0 };
        Ok((cost, tack))
    }

    pub fn is_feasible(&self, s: &SailingState, heading: Direction) -> bool {
        heading != s.wind.opposite() && self.lake.contains(s.position.step(heading))
    }

    /// All headings except into the wind and off the lake, in direction order.
    pub fn feasible_legs(&self, s: &SailingState) -> Vec<Direction> {
        Direction::ALL
            .into_iter()
            .filter(|h| self.is_feasible(s, *h))
            .collect()
    }

    pub fn initial_state(&self, wind: Direction) -> SailingState {
        SailingState {
            position: self.lake.start(),
            wind,
            tack: Tack::Unset,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn world() -> SailingWorld {
        SailingWorld::new(25).unwrap()
    }

    fn state(x: i32, y: i32, wind: Direction, tack: Tack) -> SailingState {
        SailingState {
            position: Position::new(x, y),
            wind,
            tack,
        }
    }

    #[test]
    fn points_of_sail() {
        assert_eq!(relative_point_of_sail(Direction::E, Direction::E), (PointOfSail::Away, Tack::Unset));
        assert_eq!(relative_point_of_sail(Direction::W, Direction::E).0, PointOfSail::Into);
        assert_eq!(relative_point_of_sail(Direction::N, Direction::E), (PointOfSail::Cross, Tack::Port));
        assert_eq!(relative_point_of_sail(Direction::S, Direction::E), (PointOfSail::Cross, Tack::Starboard));
        assert_eq!(relative_point_of_sail(Direction::NE, Direction::E).0, PointOfSail::Down);
        assert_eq!(relative_point_of_sail(Direction::NW, Direction::E).0, PointOfSail::Up);
        assert_eq!(Direction::N.ticks_from(Direction::S), 4);
        assert_eq!(Direction::NW.ticks_from(Direction::N), -1);
    }

    #[test]
    fn leg_cost_examples() {
        let w = world();
        let (c, t) = w.leg_cost(&state(5, 5, Direction::E, Tack::Unset), Direction::E).unwrap();
        assert_eq!((c, t), (1.0, Tack::Unset));
        // cross on a diagonal, already on that tack
        let s = state(5, 5, Direction::SE, Tack::Port);
        let (c, t) = w.leg_cost(&s, Direction::NE).unwrap();
        assert_eq!(t, Tack::Port);
        assert_abs_diff_eq!(c, 3.0 * std::f64::consts::SQRT_2, epsilon = 1e-12);
        // up, axis move, tack flip: 4 + 4
        let s = state(5, 5, Direction::SW, Tack::Starboard);
        let (c, t) = w.leg_cost(&s, Direction::E).unwrap();
        assert_eq!(t, Tack::Port);
        assert_eq!(c, 8.0);
        // first leg from an unset tack pays no delay
        let s = state(5, 5, Direction::SW, Tack::Unset);
        assert_eq!(w.leg_cost(&s, Direction::E).unwrap().0, 4.0);
    }

    #[test]
    fn infeasible_legs_error() {
        let w = world();
        let s = state(5, 5, Direction::E, Tack::Unset);
        assert!(matches!(w.leg_cost(&s, Direction::W), Err(Error::InfeasibleLeg(_))));
        let corner = state(0, 0, Direction::E, Tack::Unset);
        assert!(matches!(w.leg_cost(&corner, Direction::S), Err(Error::InfeasibleLeg(_))));
    }

    #[test]
    fn feasible_leg_counts() {
        let w = world();
        assert_eq!(w.feasible_legs(&state(5, 5, Direction::N, Tack::Unset)).len(), 7);
        // corner, wind blowing towards the corner: NE is into the wind
        let legs = w.feasible_legs(&state(0, 0, Direction::SW, Tack::Unset));
        assert_eq!(legs, vec![Direction::N, Direction::E]);
        let legs = w.feasible_legs(&state(0, 0, Direction::S, Tack::Unset));
        assert_eq!(legs, vec![Direction::NE, Direction::E]);
        for wind in Direction::ALL {
            assert!(!w.feasible_legs(&state(0, 0, wind, Tack::Unset)).is_empty());
        }
    }

    #[test]
    fn cost_table_validation() {
        assert!(CostTable::default().validate().is_ok());
        let bad = CostTable { down: 3.5, ..CostTable::default() };
        assert!(bad.validate().is_err());
        assert!(WindModel::new(0.5, 0.3, 0.3).is_err());
        assert!(LakeSpec::new(1).is_err());
    }
}
