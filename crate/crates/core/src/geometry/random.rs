use std::cmp::Ordering;
use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::points::{ConvexPointSet, Point};
use super::GeometryError;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive direction of a nonzero vector.
fn direction(v: (i64, i64)) -> (i64, i64) {
    let g = gcd(v.0, v.1);
    (v.0 / g, v.1 / g)
}

fn half(v: (i64, i64)) -> u8 {
    if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order starting at the positive x-axis.
fn by_angle(a: &(i64, i64), b: &(i64, i64)) -> Ordering {
    half(*a).cmp(&half(*b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&cross)
    })
}

/// Smallest box radius with comfortably more than `n` primitive directions.
fn radius_for(n: usize) -> i64 {
    let mut r = 2;
    loop {
        let dirs = (-r..=r)
            .flat_map(|x| (-r..=r).map(move |y| (x, y)))
            .filter(|&(x, y)| (x, y) != (0, 0) && gcd(x, y) == 1)
            .count();
        if dirs >= 2 * n {
            return r;
        }
        r += 1;
    }
}

/// A random convex `n`-gon with small integer coordinates, reproducible
/// from `seed`. Edge vectors with pairwise distinct directions that sum to
/// zero are sorted by angle; their partial sums are the vertices. Small
/// coordinates make repeated distances common.
pub fn gen_random_convex(n: usize, seed: u64) -> Result<ConvexPointSet, GeometryError> {
    if n < 3 {
        return Err(GeometryError::TooFewPoints(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = radius_for(n);
    for _ in 0..10_000 {
        let mut used = HashSet::new();
        let mut edges = Vec::with_capacity(n);
        let mut sum = (0i64, 0i64);
        while edges.len() + 1 < n {
            let v = (rng.gen_range(-r..=r), rng.gen_range(-r..=r));
            if v == (0, 0) || !used.insert(direction(v)) {
                continue;
            }
            sum = (sum.0 + v.0, sum.1 + v.1);
            edges.push(v);
        }
        let last = (-sum.0, -sum.1);
        if last == (0, 0) || !used.insert(direction(last)) {
            continue;
        }
        edges.push(last);
        edges.sort_by(by_angle);
        let mut p = (0i64, 0i64);
        let mut pts = Vec::with_capacity(n);
        for e in &edges {
            pts.push(Point::new(p.0, p.1));
            p = (p.0 + e.0, p.1 + e.1);
        }
        pts.reverse();
        if let Ok(set) = ConvexPointSet::new(pts) {
            return Ok(set);
        }
    }
    Err(GeometryError::Generation(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generates_valid_polygons() {
        for n in [3, 4, 7, 20, 60] {
            for seed in 0..5 {
                let p = gen_random_convex(n, seed).unwrap();
                assert_eq!(p.len(), n);
            }
        }
    }

    #[test]
    fn reproducible() {
        assert_eq!(
            gen_random_convex(12, 9).unwrap(),
            gen_random_convex(12, 9).unwrap()
        );
        assert_ne!(
            gen_random_convex(12, 9).unwrap(),
            gen_random_convex(12, 10).unwrap()
        );
    }
}
