use paircorr_core::weights::{kernel_product_integral, WeightParams};

#[test]
fn duality_holds_on_grid() {
    for &nu in &[0.75, 1.0, 2.0] {
        for k in 0..=3 {
            for &delta in &[0.0, 0.5, 1.0, 2.0, 5.0] {
                let p = WeightParams::new(nu, k).unwrap();
                let r = kernel_product_integral(p, delta)
                    .unwrap_or_else(|e| panic!("nu={nu} k={k} delta={delta}: {e}"));
                assert!(r.relative_discrepancy <= 1e-7);
            }
        }
    }
}
