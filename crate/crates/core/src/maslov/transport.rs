use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Metric};

/// Kato's identification S of ran P with ran P₀, for projections with ‖P − P₀‖ < 1.
///
/// S = (P₀P + (I − P₀)(I − P))(I − R)^{−1/2} with R = (P − P₀)², the inverse
/// square root summed as a binomial series. S maps ran P onto ran P₀ and
/// ker P onto ker P₀. Norms are taken in `metric`.
pub fn transport_operator(p: &CMatrix, p0: &CMatrix, metric: &Metric) -> Result<CMatrix> {
    let n = linalg::check_square(p, "projection")?;
    if p0.shape() != (n, n) || metric.dim() != n {
        return Err(Error::DimensionMismatch("projections differ in size".into()));
    }
    let id = CMatrix::identity(n, n);
    let d = p - p0;
    let dn = metric.op_norm(&d);
    if dn >= 1.0 {
        return Err(Error::ProjectionsTooFar(dn));
    }
    let r = &d * &d;
    let rn = metric.op_norm(&r);
    if rn >= 1.0 {
        return Err(Error::ProjectionsTooFar(dn));
    }
    // (1 − x)^{−1/2} = Σ c_k x^k with c_0 = 1, c_k = c_{k−1}(2k − 1)/(2k).
    let mut sum = id.clone();
    let mut power = id.clone();
    let mut coef = 1.0;
    let mut bound = 1.0;
    for k in 1..10_000 {
        coef *= (2 * k - 1) as f64 / (2 * k) as f64;
        power = &power * &r;
        bound *= rn;
        sum += &power * linalg::c(coef, 0.0);
        if coef * bound < 1e-17 {
            break;
        }
    }
    let s_prime = p0 * p + (&id - p0) * (&id - p);
    Ok(s_prime * sum)
}

/// The frame's columns (in ran P) carried into ran P₀.
pub fn transport_frame(p: &CMatrix, p0: &CMatrix, frame: &CMatrix, metric: &Metric) -> Result<CMatrix> {
    let s = transport_operator(p, p0, metric)?;
    if frame.nrows() != s.ncols() {
        return Err(Error::DimensionMismatch("frame does not live in the projection's space".into()));
    }
    Ok(s * frame)
}
