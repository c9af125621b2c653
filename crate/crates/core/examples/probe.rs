use convex_codes::code::Graph;
use convex_codes::realize3d::{realize_code_r3, realize_graph_r3};
use convex_codes::transforms::closed_to_open;
use convex_codes::verify::certify;
use std::time::Instant;

fn main() {
    for (name, g) in [
        ("K5", Graph::complete(5)),
        ("C5", Graph::new(5, [(1,2),(2,3),(3,4),(4,5),(5,1)])),
        ("sparse", Graph::new(5, [(1,2),(3,4)])),
    ] {
        let t0 = Instant::now();
        let closed = realize_graph_r3(&g).unwrap();
        let t1 = Instant::now();
        let open = closed_to_open(&closed).unwrap();
        let t2 = Instant::now();
        let code = g.full_code();
        let cert = certify(&open, &code);
        let t3 = Instant::now();
        eprintln!("{name}: closed {:?}, open {:?}, certify {:?} pass={}",
            t1 - t0, t2 - t1, t3 - t2, cert.pass);
    }
    let t = Instant::now();
    let code = Graph::complete(5).full_code();
    let _arr = realize_code_r3(&code).unwrap();
    eprintln!("realize_code_r3(K5 code): {:?}", t.elapsed());
}
