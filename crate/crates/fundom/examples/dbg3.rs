use fundom::funcval::{AnalyticFn, FunctionId};
use num_complex::Complex64 as C;

fn main() {
    let fid = FunctionId::Gamma;
    let z = C::new(-6.4160960455941005, 5.898562543496599);
    // where does Im f = 0 cross a small circle around z?
    for r in [0.02, 0.05, 0.1] {
        let mut prev = fid.eval2(z + C::new(r, 0.0)).unwrap().f.im;
        let mut crossings = vec![];
        for k in 1..=720 {
            let th = k as f64 * std::f64::consts::TAU / 720.0;
            let p = z + C::from_polar(r, th);
            let c = fid.eval2(p).unwrap().f.im;
            if prev * c < 0.0 {
                crossings.push(th);
            }
            prev = c;
        }
        println!("r={r}: crossings at {:?}", crossings.iter().map(|t| format!("{:.2}", t.to_degrees())).collect::<Vec<_>>());
    }
    // magnitude of f along the up-left direction
    for k in 0..5 {
        let p = z + C::new(-0.975, 0.223) * (0.05 * k as f64);
        let j = fid.eval2(p).unwrap();
        println!("k={k}: |f|={:.3e} arg={:+.4}", j.f.norm(), j.f.arg());
    }
}
