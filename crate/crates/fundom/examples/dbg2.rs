use fundom::funcval::{AnalyticFn, FunctionId};
use fundom::tracer::*;
use num_complex::Complex64 as C;

fn main() {
    let fid = FunctionId::Gamma;
    let upper = Window::new(-8.0, 4.0, 0.0, 6.0);
    let ctl = StepControl::default();
    // seed on the red curve that stalled near (-6.4, 5.9): seed from its crossing x3=-2.611 going up
    let comp = trace_fn(&fid, CurveKind::PreimageRealAxis, C::new(-2.611+0.001, 0.02), &ctl, &upper, ).unwrap();
    let pts = comp.points_c();
    let n = pts.len();
    println!("n={} ends={:?}", n, comp.start_end);
    for i in (n.saturating_sub(6))..n {
        let p = pts[i];
        let j = fid.eval2(p).unwrap();
        println!("{i:4} ({:+.5},{:+.5}) |f|={:.3e} |f'|={:.3e} |f''|={:.3e} d_bp={:.3e}",
            p.re, p.im, j.f.norm(), j.d1.norm(), j.d2.norm(), (j.d1/j.d2).norm());
    }
}
