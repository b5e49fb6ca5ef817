//! Streaming moments with pairwise merging.
//!
//! Partial results are combined with the pairwise update of Chan et al.,
//! extended to third and fourth central moments (Pébay 2008). Combining the
//! same leaves in the same tree shape gives bit-identical results.

/// Count, sum and central moments of a sample.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub mean: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

const LEAF: usize = 16;

impl Moments {
    pub fn single(x: f64) -> Self {
        Self { count: 1, sum: x, mean: x, ..Self::default() }
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * na * nb;
        let m2 = self.m2 + other.m2 + term1;
        let m3 = self.m3 + other.m3 + term1 * delta_n * (na - nb)
            + 3.0 * delta_n * (na * other.m2 - nb * self.m2);
        let m4 = self.m4
            + other.m4
            + term1 * delta_n2 * (na * na - na * nb + nb * nb)
            + 6.0 * delta_n2 * (na * na * other.m2 + nb * nb * self.m2)
            + 4.0 * delta_n * (na * other.m3 - nb * self.m3);
        Self {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            mean: self.mean + delta_n * nb,
            m2,
            m3,
            m4,
        }
    }

    /// Moments of `xs`, reduced as a balanced binary tree.
    pub fn from_slice(xs: &[f64]) -> Self {
        if xs.len() <= LEAF {
            return xs.iter().fold(Self::default(), |acc, &x| acc.merge(&Self::single(x)));
        }
        let (left, right) = xs.split_at(xs.len() / 2);
        Self::from_slice(left).merge(&Self::from_slice(right))
    }

    /// Tree-merges partial results in order.
    pub fn merge_all(parts: &[Self]) -> Self {
        match parts {
            [] => Self::default(),
            [one] => *one,
            _ => {
                let (left, right) = parts.split_at(parts.len() / 2);
                Self::merge_all(left).merge(&Self::merge_all(right))
            }
        }
    }

    /// `sum / count`, computed from the pairwise sum.
    pub fn sum_mean(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.sum / self.count as f64
    }

    /// Sample variance with the `n - 1` divisor; zero for a single value.
    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2 / (self.count - 1) as f64).max(0.0)
    }

    /// `n · m4 / m2² - 3`; zero when the sample has no spread.
    pub fn excess_kurtosis(&self) -> f64 {
        if self.count < 2 || self.m2 <= 0.0 {
            return 0.0;
        }
        self.count as f64 * self.m4 / (self.m2 * self.m2) - 3.0
    }
}

/// Pairwise sum of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (left, right) = xs.split_at(xs.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}
