//! Golden checks run by `prodec selftest`.

use prodec_core::ldpc::{LdpcCode, SparseBitMatrix};
use prodec_core::permdec::{
    enumerate_automorphisms, permutation_decode, DecoderParams, RowAffinePerm, SoftImage,
};
use prodec_core::{GfElement, ProductCode, RsCode};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// (0, 1, 0, α^5, 0, α^2, α) over GF(8).
fn golden_codeword(rs: &RsCode) -> Vec<GfElement> {
    let f = rs.field();
    vec![
        GfElement::ZERO,
        GfElement::ONE,
        GfElement::ZERO,
        f.alpha_pow(5),
        GfElement::ZERO,
        f.alpha_pow(2),
        f.alpha_pow(1),
    ]
}

fn permutation_golden() -> Check {
    let rs = RsCode::new(3).expect("GF(8)");
    let c = golden_codeword(&rs);
    let mut img = rs.to_binary_image(&c);
    let errs = [(0, 6, 0.3), (1, 0, 0.4), (2, 1, 0.5)];
    for &(i, j, _) in &errs {
        img.flip(i, j);
    }
    let mut y = SoftImage::from_bits(&img, 4.0);
    for &(i, j, mag) in &errs {
        y.set(i, j, y.get(i, j).signum() * mag);
    }
    let g = RowAffinePerm::new(2, vec![4, 0, 3], 7);
    let table = g.apply(&y).hard_decision().rows();
    let expected = vec![
        vec![1, 1, 1, 0, 0, 0, 0],
        vec![1, 0, 0, 1, 0, 1, 0],
        vec![1, 1, 1, 0, 0, 0, 0],
    ];
    let autos = enumerate_automorphisms(&rs);
    let out = permutation_decode(&rs, &y, &DecoderParams { eta: 4, automorphisms: &autos });
    check(
        "permutation-decode-golden",
        table == expected && out.codeword == c && autos.contains(&g),
        format!("permuted table matches: {}, decoded c: {}", table == expected, out.codeword == c),
    )
}

fn detection_golden() -> Check {
    let h = SparseBitMatrix::from_dense(&[
        vec![1, 1, 0, 1, 1, 0, 0],
        vec![1, 0, 1, 1, 0, 1, 0],
        vec![0, 1, 1, 1, 0, 0, 1],
    ])
    .expect("Hamming H");
    let code = ProductCode::new(
        RsCode::new(3).expect("GF(8)"),
        LdpcCode::from_parity_matrix(h, Some(3), "hamming-7-4"),
    );
    let rs = code.rs();
    let payload: Vec<u8> = golden_codeword(rs)[2..]
        .iter()
        .flat_map(|&s| rs.field().to_bits(s))
        .collect();
    let mut arr = code.encode(&payload).expect("payload size");
    for (r, c) in [(0, 6), (1, 0), (2, 1)] {
        arr.flip(r, c);
    }
    let rep = code.eda(&arr);
    let mut pos = rep.positions.clone();
    pos.sort_unstable();
    let ok = pos == [(0, 6), (1, 0), (2, 1)]
        && rep.odd_rows == [0, 1, 2]
        && rep.columns.first().is_some_and(|c| c.column == 0 && c.candidates == [1, 3]);
    check("error-detection-golden", ok, format!("positions {pos:?}, odd rows {:?}", rep.odd_rows))
}

fn ranks() -> Vec<Check> {
    [(3u32, 73usize, 28usize), (5, 1057, 244)]
        .into_iter()
        .map(|(s, n, rank)| {
            let ok = LdpcCode::pg(s).is_ok_and(|c| c.n() == n && c.rank() == rank && c.k() == n - rank);
            check(
                if s == 3 { "pg8-rank" } else { "pg32-rank" },
                ok,
                format!("expected n={n}, rank={rank}"),
            )
        })
        .collect()
}

pub fn run() -> Vec<Check> {
    let mut out = vec![permutation_golden(), detection_golden()];
    out.extend(ranks());
    out
}
