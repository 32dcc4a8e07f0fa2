use fundom::funcval::{AnalyticFn, FunctionId};
use fundom::tracer::*;
use num_complex::Complex64 as C;

fn main() {
    let fid = FunctionId::Gamma;
    let upper = Window::new(-8.0, 4.0, 0.0, 6.0);
    let ctl = StepControl::default();
    let crit = fundom::critpoints::gamma_crit_points(8).unwrap();
    let crit_pts: Vec<C> = crit.iter().map(|c| c.location).filter(|z| z.re > -8.0).collect();
    println!("crit: {:?}", crit_pts.iter().map(|c| format!("{:.4}", c.re)).collect::<Vec<_>>());
    let comps = preimage_real_axis(&fid, &upper, &ctl, &crit_pts, &[]);
    println!("{} components", comps.len());
    for (i, c) in comps.iter().enumerate() {
        let pts = c.points_c();
        let first = pts[0];
        let last = *pts.last().unwrap();
        let max_im = pts.iter().map(|p| p.im.abs()).fold(0.0, f64::max);
        println!("{i:2}: n={:5} color={:?} int={:?} first=({:+.3},{:+.3}) last=({:+.3},{:+.3}) max_im={:.3} ends={:?} cross={:?}",
            c.points.len(), c.color, c.image_interval, first.re, first.im, last.re, last.im, max_im,
            c.start_end, c.branch_crossings.iter().map(|p| format!("({:.2},{:.2})", p[0], p[1])).collect::<Vec<_>>());
    }
}
