use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Dense tensor of arbitrary rank over `{0, …, dim-1}` with rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<BigRational>,
}

impl Tensor {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor {
            dim,
            rank,
            data: vec![BigRational::zero(); dim.pow(rank as u32)],
        }
    }

    pub fn from_matrix(rows: &[Vec<BigRational>]) -> Self {
        let dim = rows.len();
        let mut t = Self::zeros(dim, 2);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.set(&[i, j], v.clone());
            }
        }
        t
    }

    /// `c · δ_ij`.
    pub fn identity(dim: usize, c: &BigRational) -> Self {
        let mut t = Self::zeros(dim, 2);
        for i in 0..dim {
            t.set(&[i, i], c.clone());
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &BigRational {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: BigRational) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: &BigRational) {
        let o = self.offset(idx);
        self.data[o] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// All index tuples in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let (dim, rank) = (self.dim, self.rank);
        (0..self.data.len()).map(move |mut o| {
            let mut idx = vec![0; rank];
            for slot in idx.iter_mut().rev() {
                *slot = o % dim;
                o /= dim;
            }
            idx
        })
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &BigRational)> + '_ {
        self.indices()
            .zip(self.data.iter())
            .filter(|(_, v)| !v.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.rank), (other.dim, other.rank));
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::from_integer(1.into())))
    }

    /// Sum of squares of all entries.
    pub fn norm_squared(&self) -> BigRational {
        self.data
            .iter()
            .fold(BigRational::zero(), |acc, v| acc + v * v)
    }

    /// Trace of a rank-2 tensor.
    pub fn trace(&self) -> BigRational {
        assert_eq!(self.rank, 2);
        (0..self.dim).fold(BigRational::zero(), |acc, i| acc + self.get(&[i, i]))
    }

    /// Matrix rows of a rank-2 tensor.
    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        assert_eq!(self.rank, 2);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(&[i, j]).clone()).collect())
            .collect()
    }

    /// Matrix product of two rank-2 tensors.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!((self.rank, other.rank), (2, 2));
        let d = self.dim;
        let mut out = Self::zeros(d, 2);
        for i in 0..d {
            for j in 0..d {
                let mut s = BigRational::zero();
                for k in 0..d {
                    s += self.get(&[i, k]) * other.get(&[k, j]);
                }
                out.set(&[i, j], s);
            }
        }
        out
    }

    /// Contraction of a rank-4 tensor on slots 1 and 3 (0-based 0 and 2):
    /// `Ric_bd = Σ_a T_abad`.
    pub fn ricci_contraction(&self) -> Self {
        assert_eq!(self.rank, 4);
        let d = self.dim;
        let mut out = Self::zeros(d, 2);
        for b in 0..d {
            for c in 0..d {
                let mut s = BigRational::zero();
                for a in 0..d {
                    s += self.get(&[a, b, a, c]);
                }
                out.set(&[b, c], s);
            }
        }
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}
