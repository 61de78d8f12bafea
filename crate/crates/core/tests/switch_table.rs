//! Switching points for every repeater count of the reference table.

use distill::chain::Protocol;
use distill::efficiency::{default_grid, protocol_curves, switching_points};

const REFERENCE: [(u32, [f64; 3]); 9] = [
    (1, [0.9343, 0.9356, 0.9655]),
    (3, [0.9465, 0.9474, 0.9717]),
    (5, [0.9524, 0.9532, 0.9747]),
    (7, [0.9561, 0.9568, 0.9766]),
    (9, [0.9587, 0.9594, 0.9780]),
    (11, [0.9608, 0.9614, 0.9791]),
    (13, [0.9624, 0.9630, 0.9799]),
    (101, [0.9779, 0.9782, 0.9881]),
    (1001, [0.9877, 0.9879, 0.9934]),
];

#[test]
fn all_rows_within_tolerance() {
    let grid = default_grid::<f64>();
    for (n, expected) in REFERENCE {
        let points = switching_points(&protocol_curves(n, &Protocol::ALL, &grid).unwrap()).unwrap();
        for (p, e) in points.iter().zip(expected) {
            let f = p.fidelity.expect("crossing inside the grid");
            assert!((f - e).abs() < 3e-3, "{n} repeaters {}->{}: {f} vs {e}", p.from, p.to);
        }
    }
}

#[test]
fn rows_increase_with_repeaters() {
    let grid = default_grid::<f64>();
    let rows: Vec<Vec<f64>> = REFERENCE
        .iter()
        .map(|(n, _)| {
            let curves = protocol_curves(*n, &Protocol::ALL, &grid).unwrap();
            switching_points(&curves)
                .unwrap()
                .iter()
                .map(|p| p.fidelity.unwrap())
                .collect()
        })
        .collect();
    for w in rows.windows(2) {
        assert!(w[0].iter().zip(&w[1]).all(|(a, b)| a < b));
    }
    for r in &rows {
        assert!(r[0] < r[1] && r[1] < r[2]);
    }
}
