use super::FiniteRing;

/// A 2x2 matrix `[[a, b], [c, d]]` over a [`FiniteRing`], entries as indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Mat2 {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity(r: &FiniteRing) -> Mat2 {
        Mat2::new(r.one(), 0, 0, r.one())
    }

    /// `E12(x) = [[1, x], [0, 1]]`.
    pub fn e12(r: &FiniteRing, x: usize) -> Mat2 {
        Mat2::new(r.one(), x, 0, r.one())
    }

    /// `E21(x) = [[1, 0], [x, 1]]`.
    pub fn e21(r: &FiniteRing, x: usize) -> Mat2 {
        Mat2::new(r.one(), 0, x, r.one())
    }

    pub fn diag(x: usize, y: usize) -> Mat2 {
        Mat2::new(x, 0, 0, y)
    }

    pub fn entries(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self, r: &FiniteRing) -> usize {
        r.sub(r.mul(self.a, self.d), r.mul(self.b, self.c))
    }

    pub fn is_invertible(&self, r: &FiniteRing) -> bool {
        r.is_unit(self.det(r))
    }

    pub fn mul(&self, r: &FiniteRing, o: &Mat2) -> Mat2 {
        let dot = |x: usize, y: usize, z: usize, w: usize| r.add(r.mul(x, y), r.mul(z, w));
        Mat2::new(
            dot(self.a, o.a, self.b, o.c),
            dot(self.a, o.b, self.b, o.d),
            dot(self.c, o.a, self.d, o.c),
            dot(self.c, o.b, self.d, o.d),
        )
    }

    pub fn inverse(&self, r: &FiniteRing) -> Option<Mat2> {
        let di = r.inv(self.det(r))?;
        Some(Mat2::new(
            r.mul(di, self.d),
            r.mul(di, r.neg(self.b)),
            r.mul(di, r.neg(self.c)),
            r.mul(di, self.a),
        ))
    }

    pub fn scale(&self, r: &FiniteRing, u: usize) -> Mat2 {
        Mat2::new(r.mul(u, self.a), r.mul(u, self.b), r.mul(u, self.c), r.mul(u, self.d))
    }

    /// Matrix times column vector.
    pub fn apply(&self, r: &FiniteRing, v: (usize, usize)) -> (usize, usize) {
        (
            r.add(r.mul(self.a, v.0), r.mul(self.b, v.1)),
            r.add(r.mul(self.c, v.0), r.mul(self.d, v.1)),
        )
    }

    /// Representative of the class modulo scalar units: the unit multiple
    /// whose entry list `(a, b, c, d)` is lexicographically smallest.
    pub fn projective_canonical(&self, r: &FiniteRing) -> Mat2 {
        r.units()
            .iter()
            .map(|&u| self.scale(r, u))
            .min()
            .expect("the unit group is nonempty")
    }
}
