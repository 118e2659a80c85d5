use std::fmt;
use std::str::FromStr;

use super::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    pub fn sq_dist(self, o: Point) -> i128 {
        let dx = (self.x - o.x) as i128;
        let dy = (self.y - o.y) as i128;
        dx * dx + dy * dy
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

/// Twice the signed area of `abc`; negative for a clockwise turn.
pub fn orient(a: Point, b: Point, c: Point) -> i128 {
    let (abx, aby) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (acx, acy) = ((c.x - a.x) as i128, (c.y - a.y) as i128);
    abx * acy - aby * acx
}

/// Integer points in strictly convex position, listed clockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPointSet {
    points: Vec<Point>,
}

impl ConvexPointSet {
    /// Validates strict convexity and clockwise order with exact
    /// orientation tests: every vertex lies strictly to the right of every
    /// edge not incident to it.
    pub fn new(points: Vec<Point>) -> Result<ConvexPointSet, GeometryError> {
        let n = points.len();
        if n < 3 {
            return Err(GeometryError::TooFewPoints(n));
        }
        for a in 0..n {
            let b = (a + 1) % n;
            for off in 2..n {
                let c = (a + off) % n;
                if orient(points[a], points[b], points[c]) >= 0 {
                    return Err(GeometryError::NotConvex { triple: [a, b, c] });
                }
            }
        }
        Ok(ConvexPointSet { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Writes the point-set file format: a header `n k`, then one `x y`
    /// line per vertex.
    pub fn to_file_string(&self, k: u8) -> String {
        let mut s = format!("{} {}\n", self.len(), k);
        for p in &self.points {
            s.push_str(&format!("{p}\n"));
        }
        s
    }
}

/// Exact rational `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Rational {
    num: i128,
    den: i128,
}

impl FromStr for Rational {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad coordinate {s:?}");
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                n.parse::<i128>().map_err(|_| bad())?,
                d.parse::<i128>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i128>().map_err(|_| bad())?, 1),
        };
        if d == 0 {
            return Err(bad());
        }
        Ok(if d < 0 {
            Rational { num: -n, den: -d }
        } else {
            Rational { num: n, den: d }
        })
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Parses the point-set file format. Rational coordinates are scaled by
/// the common denominator, which preserves convexity and every distance
/// comparison.
pub fn parse_point_file(text: &str) -> Result<(ConvexPointSet, u8), GeometryError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| GeometryError::Parse("missing header".into()))?;
    let mut h = header.split_whitespace();
    let n: usize = h
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| GeometryError::Parse(format!("bad header {header:?}")))?;
    let k: u8 = h
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| GeometryError::Parse(format!("bad header {header:?}")))?;
    let mut coords = Vec::with_capacity(n);
    for line in lines {
        let mut it = line.split_whitespace();
        let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
            return Err(GeometryError::Parse(format!(
                "expected `x y`, got {line:?}"
            )));
        };
        let x: Rational = x.parse().map_err(GeometryError::Parse)?;
        let y: Rational = y.parse().map_err(GeometryError::Parse)?;
        coords.push((x, y));
    }
    if coords.len() != n {
        return Err(GeometryError::Parse(format!(
            "header says {n} points, found {}",
            coords.len()
        )));
    }
    let mut lcm: i128 = 1;
    for (x, y) in &coords {
        for d in [x.den, y.den] {
            lcm = lcm
                .checked_mul(d / gcd(lcm, d))
                .ok_or_else(|| GeometryError::Parse("denominators too large".into()))?;
        }
    }
    let scale = |r: Rational| -> Result<i64, GeometryError> {
        r.num
            .checked_mul(lcm / r.den)
            .and_then(|v| i64::try_from(v).ok())
            .filter(|v| v.abs() < 1 << 40)
            .ok_or_else(|| GeometryError::Parse("coordinate out of range".into()))
    };
    let points = coords
        .into_iter()
        .map(|(x, y)| Ok(Point::new(scale(x)?, scale(y)?)))
        .collect::<Result<Vec<_>, GeometryError>>()?;
    Ok((ConvexPointSet::new(points)?, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point> {
        vec![
            Point::new(0, 1),
            Point::new(1, 1),
            Point::new(1, 0),
            Point::new(0, 0),
        ]
    }

    #[test]
    fn clockwise_square_is_convex() {
        assert!(ConvexPointSet::new(square()).is_ok());
        let mut ccw = square();
        ccw.reverse();
        assert!(matches!(
            ConvexPointSet::new(ccw),
            Err(GeometryError::NotConvex { .. })
        ));
    }

    #[test]
    fn collinear_and_star_rejected() {
        let collinear = vec![
            Point::new(0, 2),
            Point::new(1, 2),
            Point::new(2, 2),
            Point::new(1, 0),
        ];
        assert!(ConvexPointSet::new(collinear).is_err());
        // pentagram order of a convex pentagon
        let p = [
            Point::new(0, 10),
            Point::new(9, 3),
            Point::new(6, -8),
            Point::new(-6, -8),
            Point::new(-9, 3),
        ];
        let star = vec![p[0], p[2], p[4], p[1], p[3]];
        assert!(ConvexPointSet::new(star).is_err());
    }

    #[test]
    fn file_round_trip_with_rationals() {
        let text = "4 2\n0 1/2\n1/2 1/2\n1/2 0\n0 0\n";
        let (p, k) = parse_point_file(text).unwrap();
        assert_eq!(k, 2);
        assert_eq!(p.points(), &square()[..]);
        let again = parse_point_file(&p.to_file_string(2)).unwrap().0;
        assert_eq!(again, p);
    }

    #[test]
    fn file_errors() {
        assert!(parse_point_file("").is_err());
        assert!(parse_point_file("3 1\n0 0\n1 1\n").is_err());
        let err = parse_point_file("4 1\n0 0\n1 1\n1 0\n0 1\n").unwrap_err();
        assert!(matches!(err, GeometryError::NotConvex { .. }));
    }
}
