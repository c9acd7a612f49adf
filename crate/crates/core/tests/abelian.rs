use coloured_neretin::abelian::{closed_form_rank, partitions, smith_normal_form, vf_abelianization, IntMatrix, SftGraph};
use coloured_neretin::sampling::seeded;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

// Laplace expansion, fine for the small sizes used here.
fn det(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

// Invariant factors as ratios of gcds of k-by-k minors.
fn determinantal_factors(m: &[Vec<i128>]) -> Vec<i128> {
    let (r, c) = (m.len(), m[0].len());
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g == 0 {
            out.extend(std::iter::repeat(0).take(r.min(c) - k + 1));
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    let mut rng = seeded(31);
    for _ in 0..300 {
        let r = rng.gen_range(1..=4);
        let c = rng.gen_range(1..=4);
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-6..=6)).collect()).collect();
        let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let snf = smith_normal_form(&IntMatrix::from_rows(rows.clone()));
        let got: Vec<BigInt> = snf.invariants.invariant_factors.clone();
        let want: Vec<BigInt> = determinantal_factors(&wide).into_iter().map(BigInt::from).collect();
        assert_eq!(got, want, "{rows:?}");
    }
}

#[test]
fn smith_form_transforms_are_unimodular() {
    let mut rng = seeded(32);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(rows);
        let s = smith_normal_form(&m);
        assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal);
        assert!(s.diagonal.is_diagonal());
        for u in [&s.left, &s.right] {
            let d = u.determinant();
            assert!(d == BigInt::from(1) || d == BigInt::from(-1));
        }
    }
}

#[test]
fn abelianization_rank_matches_parity_rule() {
    for total in 3..=9 {
        for p in partitions(total) {
            let ab = vf_abelianization(&p).unwrap();
            assert_eq!(ab.rank, closed_form_rank(&p), "{p:?}");
            assert_eq!(ab.determinant, ab.expected_determinant(), "{p:?}");
            assert_eq!(ab.kernel_rank, 0);
        }
    }
}

#[test]
fn two_two_three() {
    let ab = vf_abelianization(&[2, 2, 3]).unwrap();
    assert_eq!(ab.rank, 2);
}

#[test]
fn graph_out_degrees() {
    // every orbit vertex emits d edges, every loop vertex exactly one
    for p in partitions(6) {
        let g = SftGraph::new(&p).unwrap();
        for v in 0..g.vertices().len() {
            let out = g.out_edges(v).count();
            if g.is_orbit_vertex(v) {
                assert_eq!(out, g.d(), "{p:?}");
            } else {
                assert_eq!(out, 1);
            }
        }
    }
}
