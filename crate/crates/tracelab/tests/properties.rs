use proptest::prelude::*;
use tracelab::chains::{ChainComplex, Side};
use tracelab::linalg::DENSE_COLS;
use tracelab::{Field, SparseMatrix};

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Field::new(p).unwrap())
}

fn matrix(f: Field, rows: usize, cols: usize) -> impl Strategy<Value = SparseMatrix> {
    // mostly zeros, so that ranks are not always full
    prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => 1..7i64], rows * cols).prop_map(move |xs| {
        let data: Vec<Vec<i64>> = xs.chunks(cols.max(1)).take(rows).map(<[i64]>::to_vec).collect();
        if cols == 0 {
            SparseMatrix::zero(f, rows, 0)
        } else {
            SparseMatrix::from_dense(f, &data)
        }
    })
}

fn sized_matrix() -> impl Strategy<Value = SparseMatrix> {
    (field(), 0..8usize, 0..8usize).prop_flat_map(|(f, r, c)| matrix(f, r, c))
}

/// A complex `C_2 → C_1 → C_0` with `d_2` built from the kernel of `d_1`.
fn complex_over(f: Field) -> impl Strategy<Value = ChainComplex> {
    (0..5usize, 1..6usize, 0..4i64)
        .prop_flat_map(move |(c0, c1, lo)| (Just(f), Just(lo), matrix(f, c0, c1), 0..4usize))
        .prop_flat_map(|(f, lo, d1, c2)| {
            let k = d1.kernel();
            let kd = k.basis.len();
            (Just(f), Just(lo), Just(d1), Just(k.basis), matrix(f, kd, c2))
        })
        .prop_map(|(f, lo, d1, ker, coeffs)| {
            let kmat = SparseMatrix::from_cols(f, d1.ncols(), ker).unwrap();
            let d2 = if coeffs.nrows() == 0 {
                SparseMatrix::zero(f, d1.ncols(), coeffs.ncols())
            } else {
                kmat.mul(&coeffs).unwrap()
            };
            ChainComplex::new(f, lo, vec![d1.nrows(), d1.ncols(), d2.ncols()], vec![d1, d2]).unwrap()
        })
}

fn complex() -> impl Strategy<Value = ChainComplex> {
    field().prop_flat_map(complex_over)
}

fn pair() -> impl Strategy<Value = (ChainComplex, ChainComplex)> {
    field().prop_flat_map(|f| (complex_over(f), complex_over(f)))
}

fn homology(c: &ChainComplex) -> Vec<(i64, usize)> {
    c.betti().into_iter().filter(|&(_, d)| d > 0).collect()
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_the_column_count(m in sized_matrix()) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.ncols());
    }

    #[test]
    fn kernel_vectors_are_killed(m in sized_matrix()) {
        for v in m.kernel().basis {
            prop_assert!(m.apply(&v).is_empty());
        }
    }

    #[test]
    fn row_and_column_rank_agree(m in sized_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn dense_and_sparse_elimination_agree(m in (field(), 1..10usize).prop_flat_map(|(f, r)| matrix(f, r, 6))) {
        // repeated columns push the matrix past the dense cutoff without changing the rank
        let copies: Vec<&SparseMatrix> = std::iter::repeat_n(&m, DENSE_COLS / 6 + 1).collect();
        let wide = SparseMatrix::hstack(&copies).unwrap();
        prop_assert!(wide.ncols() > DENSE_COLS);
        prop_assert_eq!(wide.rank(), m.rank());
        prop_assert_eq!(wide.kernel().dim(), wide.ncols() - m.rank());
    }

    #[test]
    fn multiplication_is_associative(
        (a, b, c) in (field(), 1..5usize, 1..5usize, 1..5usize, 1..5usize)
            .prop_flat_map(|(f, i, j, k, l)| (matrix(f, i, j), matrix(f, j, k), matrix(f, k, l)))
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left.to_dense(), right.to_dense());
    }

    #[test]
    fn euler_characteristic_matches_homology(c in complex()) {
        let from_homology: i64 = c.betti().iter().map(|(&n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        prop_assert_eq!(c.euler_characteristic(), from_homology);
    }

    #[test]
    fn shift_moves_homology(c in complex(), k in -3..4i64) {
        let moved: Vec<_> = homology(&c).into_iter().map(|(n, d)| (n + k, d)).collect();
        prop_assert_eq!(homology(&c.shift(k)), moved);
    }

    #[test]
    fn direct_sum_adds_homology((a, b) in pair()) {
        let s = a.direct_sum(&b).unwrap();
        for (n, d) in s.betti() {
            prop_assert_eq!(d, a.betti().get(&n).copied().unwrap_or(0) + b.betti().get(&n).copied().unwrap_or(0));
        }
    }

    #[test]
    fn kunneth((a, b) in pair()) {
        let t = ChainComplex::tensor(&a, &b).unwrap();
        let (ha, hb) = (a.betti(), b.betti());
        for (n, d) in t.betti() {
            let want: usize = ha.iter().map(|(&i, &x)| x * hb.get(&(n - i)).copied().unwrap_or(0)).sum();
            prop_assert_eq!(d, want, "degree {}", n);
        }
    }

    #[test]
    fn truncation_keeps_one_side(c in complex(), cut in 0..3i64) {
        let n = c.lo() + cut;
        let h = c.betti();
        let above = c.truncate(Side::AtOrAbove, n).unwrap().betti();
        let below = c.truncate(Side::AtOrBelow, n).unwrap().betti();
        for (&m, &d) in &h {
            let a = above.get(&m).copied().unwrap_or(0);
            let b = below.get(&m).copied().unwrap_or(0);
            prop_assert_eq!(a, if m >= n { d } else { 0 });
            prop_assert_eq!(b, if m <= n { d } else { 0 });
        }
    }
}
