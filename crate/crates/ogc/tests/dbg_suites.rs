use ogc::involution::iota_matrix;
use ogc::skeleton::*;
use ogc::verify::*;
use ogc::basis::enumerate_basis;

#[test]
fn iota_skel_commutes_with_inclusion() {
    for d in [3i64, 2] {
        for b in [2i64] {
            let slices = o1_basis_by_loop_order(d, b).unwrap();
            for s in &slices {
                if s.dim() == 0 { continue; }
                let full = enumerate_basis(d, s.v, s.e).unwrap();
                let incl = inclusion_matrix(s, &full, d).unwrap();
                let i_sk = skeleton_iota_matrix(s, d).unwrap();
                let i_full = iota_matrix(&full, d).unwrap();
                let lhs = i_full.mul(&incl);
                let rhs = incl.mul(&i_sk);
                println!("d={d} b={b} ({},{}): skel dim {}, full dim {}, commute: {}", s.v, s.e, s.dim(), full.dim(), lhs == rhs);
                if lhs != rhs {
                    for c in &s.classes { println!("   class {c}"); }
                    println!("   lhs {:?}", lhs.iter().collect::<Vec<_>>());
                    println!("   rhs {:?}", rhs.iter().collect::<Vec<_>>());
                }
            }
        }
    }
}
