use fundom::domains::*;
use fundom::funcval::{AnalyticFn, FunctionId};
use fundom::tracer::{StepControl, Window};

fn main() {
    let w = Window::new(-8.0, 4.0, -6.0, 6.0);
    let atlas = gamma_domains(&w, (-3, 1), &StepControl::default()).unwrap();
    let om1 = atlas.by_index(1, false).unwrap();
    let pts = om1.interior_points(6, 99);
    println!("interior pts: {:?}", pts.iter().map(|p| format!("({:.2},{:.2})", p.re, p.im)).collect::<Vec<_>>());
    for i in 0..pts.len().saturating_sub(1) {
        let p = pts[i];
        let seed = pts[i + 1];
        let target = FunctionId::Gamma.eval2(p).unwrap().f;
        match invert_in_domain(&FunctionId::Gamma, &atlas, om1, target, seed) {
            Some(z) => println!("p={p:.4} -> z={z:.4} err={:.2e}", (z - p).norm()),
            None => {
                println!("p={p:.4} seed={seed:.4} |target|={:.3e} FAILED", target.norm());
                let l = locate(p, &atlas);
                println!("  locate(p) = {:?}", l.map(|x| x.to_string()));
            }
        }
    }
}
