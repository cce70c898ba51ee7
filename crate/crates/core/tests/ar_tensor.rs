use ddouble::acceptance::catalog_sample;
use ddouble::arlab::verify_ar_sequence;
use ddouble::catalog::build;
use ddouble::dalgebra::DoubleContext;
use ddouble::label::IndecLabel;
use ddouble::modrep::{decompose, ModuleRep};
use ddouble::tensor_theorems::splitting_trace;

// The standard sequence at the trivial module, tensored with N, splits
// exactly when N is not a splitting trace module.
#[test]
fn trivial_sequence_splits_iff_no_splitting_trace() {
    for (n, d) in [(3, 3), (6, 3)] {
        let c = DoubleContext::new(n, d).unwrap();
        let seq = verify_ar_sequence(&c, &IndecLabel::Simple { u: 0, j: 0 }, 0).unwrap();
        let mut seen = [0usize; 2];
        for f in catalog_sample(&c, 16, 3) {
            let m = build(&c, &f).unwrap();
            if m.dim() > 8 {
                continue;
            }
            let st = splitting_trace(&m).unwrap();
            let mid = decompose(&seq.middle.tensor(&m).unwrap()).unwrap();
            let ends = decompose(&ModuleRep::direct_sum(&seq.left.tensor(&m).unwrap(), &seq.right.tensor(&m).unwrap())).unwrap();
            assert_eq!(mid.same_labels(&ends), !st, "({n},{d}) {}", f.render(&c));
            seen[st as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "({n},{d}) sample lacks one side: {seen:?}");
    }
}

#[test]
fn even_length_module_splits_the_sequence() {
    let c = DoubleContext::new(3, 3).unwrap();
    let seq = verify_ar_sequence(&c, &IndecLabel::Simple { u: 0, j: 0 }, 0).unwrap();
    let m2 = build(&c, &IndecLabel::parse(&c, "M+(0,0,2)").unwrap()).unwrap();
    assert!(!splitting_trace(&m2).unwrap());
    let mid = decompose(&seq.middle.tensor(&m2).unwrap()).unwrap();
    let ends = decompose(&ModuleRep::direct_sum(&seq.left.tensor(&m2).unwrap(), &seq.right.tensor(&m2).unwrap())).unwrap();
    assert!(mid.same_labels(&ends));
}
