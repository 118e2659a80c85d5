use super::census::Polygon;

/// The regular `n`-gon, compared exactly. The chord spanning `s` steps has
/// length `2 sin(pi s / n)`, which is strictly increasing in
/// `min(s, n - s)`; that step count is used as the distance key, so no
/// irrational coordinates are ever needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegularPolygon {
    n: usize,
}

impl RegularPolygon {
    pub fn new(n: usize) -> RegularPolygon {
        assert!(n >= 3, "a polygon needs at least 3 vertices");
        RegularPolygon { n }
    }

    /// The regular `(2m + 1)`-gon.
    pub fn odd(m: usize) -> RegularPolygon {
        RegularPolygon::new(2 * m + 1)
    }
}

impl Polygon for RegularPolygon {
    type Dist = usize;

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn dist(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b) % self.n;
        d.min(self.n - d)
    }
}
