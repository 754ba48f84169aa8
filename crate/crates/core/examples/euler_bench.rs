use s1q_core::charclass::{s5_codim4_curvature, s5_codim4_curvature_crosscheck, euler_integral};
use s1q_core::s1::example;
use std::time::Instant;

fn main() {
    let ex = example::<f64>("s5_codim4").unwrap();
    let chart = &ex.quotient.chart;
    let t0 = Instant::now();
    let xc = s5_codim4_curvature_crosscheck(chart, &[vec![1.1,0.4,2.0,0.7], vec![2.0,3.0,1.0,1.1]]).unwrap();
    println!("crosscheck={xc:.3e} ({:?})", t0.elapsed());
    let curv = s5_codim4_curvature(chart).unwrap();
    let t0 = Instant::now();
    let (v, err) = euler_integral(&curv, &[64, 64, 64, 64]).unwrap();
    println!("value={v:.12} err={err:.3e} elapsed={:?}", t0.elapsed());
}
