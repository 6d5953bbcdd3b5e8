use std::fmt;

use super::ring::RingElem;
use super::zmod::ZModPr;
use super::RingError;

/// Dense matrix over ℤ/p^r.
#[derive(Clone, PartialEq)]
pub struct ZMat {
    p: u64,
    r: u32,
    rows: usize,
    cols: usize,
    data: Vec<ZModPr>,
}

/// Smith form U·A·V = diag(p^{e_0}, p^{e_1}, ...); `exps[i] = r` marks a zero divisor.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: ZMat,
    pub v: ZMat,
    pub exps: Vec<u32>,
}

impl ZMat {
    pub fn zeros(p: u64, r: u32, rows: usize, cols: usize) -> Self {
        ZMat { p, r, rows, cols, data: vec![ZModPr::zero(p, r); rows * cols] }
    }

    pub fn identity(p: u64, r: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, r, n, n);
        for i in 0..n {
            m.set(i, i, ZModPr::one(p, r));
        }
        m
    }

    pub fn from_fn(p: u64, r: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> ZModPr) -> Self {
        let mut m = Self::zeros(p, r, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_i64(p: u64, r: u32, rows: usize, cols: usize, v: &[i64]) -> Self {
        Self::from_fn(p, r, rows, cols, |i, j| ZModPr::new(p, r, v[i * cols + j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u64, r: u32, rows: usize, cols: &[Vec<ZModPr>]) -> Self {
        Self::from_fn(p, r, rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> ZModPr {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: ZModPr) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<ZModPr> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<ZModPr> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, self.r, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Self::zeros(self.p, self.r, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx] + a * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ZModPr]) -> Vec<ZModPr> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(ZModPr::zero(self.p, self.r), |acc, j| acc + self.get(i, j) * v[j]))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.p, self.r, self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.p, self.r, self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j))
    }

    pub fn scale(&self, s: ZModPr) -> Self {
        Self::from_fn(self.p, self.r, self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.r, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_dst += c · row_src
    fn row_axpy(&mut self, dst: usize, src: usize, c: ZModPr) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + c * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, c: ZModPr) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + c * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn row_scale(&mut self, i: usize, c: ZModPr) {
        for j in 0..self.cols {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    pub fn smith(&self) -> Smith {
        let (p, r) = (self.p, self.r);
        let mut a = self.clone();
        let mut u = Self::identity(p, r, self.rows);
        let mut v = Self::identity(p, r, self.cols);
        let s = self.rows.min(self.cols);
        let mut exps = Vec::with_capacity(s);
        for k in 0..s {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in k..a.rows {
                for j in k..a.cols {
                    let x = a.get(i, j);
                    if !x.is_zero() {
                        let e = x.valuation();
                        if best.map_or(true, |b| e < b.0) {
                            best = Some((e, i, j));
                        }
                    }
                }
                if matches!(best, Some((0, _, _))) {
                    break;
                }
            }
            let Some((e, bi, bj)) = best else {
                exps.extend(std::iter::repeat(r).take(s - k));
                break;
            };
            a.swap_rows(k, bi);
            u.swap_rows(k, bi);
            a.swap_cols(k, bj);
            v.swap_cols(k, bj);
            // normalize pivot to exactly p^e
            let piv = a.get(k, k);
            let unit = ZModPr::new(p, r, (piv.value() / p.pow(e)) as i64);
            let uinv = unit.inv().expect("pivot unit part");
            a.row_scale(k, uinv);
            u.row_scale(k, uinv);
            let pe = p.pow(e);
            for i in 0..a.rows {
                if i != k {
                    let x = a.get(i, k);
                    if !x.is_zero() {
                        let t = ZModPr::new(p, r, (x.value() / pe) as i64);
                        a.row_axpy(i, k, -t);
                        u.row_axpy(i, k, -t);
                    }
                }
            }
            for j in 0..a.cols {
                if j != k {
                    let x = a.get(k, j);
                    if !x.is_zero() {
                        let t = ZModPr::new(p, r, (x.value() / pe) as i64);
                        a.col_axpy(j, k, -t);
                        v.col_axpy(j, k, -t);
                    }
                }
            }
            exps.push(e);
        }
        Smith { u, v, exps }
    }

    /// Rank of the reduction mod p.
    pub fn rank_mod_p(&self) -> usize {
        self.smith().exps.iter().filter(|&&e| e == 0).count()
    }

    /// Length (as a ℤ_p-module) of the column span.
    pub fn image_length(&self) -> u32 {
        self.smith().exps.iter().map(|&e| self.r - e).sum()
    }

    /// Length of the kernel of x ↦ A·x on (ℤ/p^r)^cols.
    pub fn kernel_length(&self) -> u32 {
        self.cols as u32 * self.r - self.image_length()
    }

    /// Generators of the kernel of x ↦ A·x.
    pub fn kernel_generators(&self) -> Vec<Vec<ZModPr>> {
        let sm = self.smith();
        let mut gens = Vec::new();
        for j in 0..self.cols {
            let e = sm.exps.get(j).copied().unwrap_or(self.r);
            if e == 0 {
                continue;
            }
            let scale = ZModPr::new(self.p, self.r, self.p.pow(self.r - e) as i64);
            gens.push(sm.v.column(j).into_iter().map(|x| x * scale).collect());
        }
        gens
    }

    /// Solve A·x = b. Returns x and the precision loss δ (largest pivot valuation used):
    /// x is determined modulo p^{r−δ}.
    pub fn solve(&self, b: &[ZModPr]) -> Result<(Vec<ZModPr>, u32), RingError> {
        let sm = self.smith();
        let ub = sm.u.mul_vec(b);
        let mut y = vec![ZModPr::zero(self.p, self.r); self.cols];
        let mut loss = 0;
        for (i, val) in ub.iter().enumerate() {
            let e = sm.exps.get(i).copied().unwrap_or(self.r);
            if e >= self.r {
                if !val.is_zero() {
                    return Err(RingError::Singular("inconsistent linear system".into()));
                }
                continue;
            }
            if val.valuation() < e {
                return Err(RingError::Singular("right-hand side not divisible by pivot".into()));
            }
            y[i] = val.with_value((val.value() / self.p.pow(e)) as i64);
            loss = loss.max(e);
        }
        Ok((sm.v.mul_vec(&y), loss))
    }

    /// Inverse of a square matrix invertible mod p.
    pub fn inverse(&self) -> Result<Self, RingError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut cols = Vec::new();
        for j in 0..n {
            let mut e = vec![ZModPr::zero(self.p, self.r); n];
            e[j] = ZModPr::one(self.p, self.r);
            let (x, loss) = self.solve(&e)?;
            if loss > 0 {
                return Err(RingError::NotInvertible("matrix is singular mod p".into()));
            }
            cols.push(x);
        }
        Ok(Self::from_columns(self.p, self.r, n, &cols))
    }
}

impl fmt::Debug for ZMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMat {}x{} mod {}^{}", self.rows, self.cols, self.p, self.r)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).signed().to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_reconstructs() {
        let a = ZMat::from_i64(3, 4, 3, 3, &[3, 6, 9, 1, 2, 3, 0, 9, 27]);
        let sm = a.smith();
        let d = sm.u.mul(&a).mul(&sm.v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j && sm.exps[i] < 4 { 3i64.pow(sm.exps[i]) } else { 0 };
                assert_eq!(d.get(i, j).value() as i64, want, "{d:?}");
            }
        }
        assert_eq!(a.rank_mod_p(), 1);
    }

    #[test]
    fn solve_with_loss() {
        let a = ZMat::from_i64(5, 3, 2, 2, &[5, 0, 0, 1]);
        let b = [ZModPr::new(5, 3, 10), ZModPr::new(5, 3, 7)];
        let (x, loss) = a.solve(&b).unwrap();
        assert_eq!(loss, 1);
        assert_eq!(x[0].value() % 25, 2);
        assert_eq!(x[1].value(), 7);
        assert!(a.solve(&[ZModPr::new(5, 3, 1), ZModPr::new(5, 3, 0)]).is_err());
    }

    #[test]
    fn kernel_and_lengths() {
        let a = ZMat::from_i64(3, 2, 2, 3, &[1, 1, 0, 0, 3, 0]);
        for g in a.kernel_generators() {
            assert!(a.mul_vec(&g).iter().all(|x| x.is_zero()));
        }
        assert_eq!(a.image_length() + a.kernel_length(), 3 * 2);
        assert_eq!(a.kernel_length(), 3);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = ZMat::from_i64(7, 2, 2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ZMat::identity(7, 2, 2));
    }

    proptest::proptest! {
        #[test]
        fn kernel_generators_are_killed(v in proptest::collection::vec(-100i64..100, 12)) {
            let a = ZMat::from_i64(3, 3, 3, 4, &v);
            for g in a.kernel_generators() {
                proptest::prop_assert!(a.mul_vec(&g).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn inverse_is_two_sided(v in proptest::collection::vec(-100i64..100, 9)) {
            let a = ZMat::from_i64(5, 2, 3, 3, &v);
            if let Ok(b) = a.inverse() {
                proptest::prop_assert_eq!(a.mul(&b), ZMat::identity(5, 2, 3));
                proptest::prop_assert_eq!(b.mul(&a), ZMat::identity(5, 2, 3));
            }
        }
    }
}
