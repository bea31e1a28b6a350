use super::*;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

/// Tiny formula language evaluated independently of the BDD code.
#[derive(Clone, Debug)]
enum F {
    Var(u32),
    Const(bool),
    Not(Box<F>),
    Bin(BinOp, Box<F>, Box<F>),
}

fn eval_f(f: &F, a: u32) -> bool {
    match f {
        F::Var(v) => a >> v & 1 == 1,
        F::Const(b) => *b,
        F::Not(x) => !eval_f(x, a),
        F::Bin(op, x, y) => {
            let (x, y) = (eval_f(x, a), eval_f(y, a));
            match op {
                BinOp::And => x && y,
                BinOp::Or => x || y,
                BinOp::Xor => x != y,
                BinOp::Implies => !x || y,
                BinOp::Iff => x == y,
            }
        }
    }
}

fn table(f: &F, n: u32) -> Vec<bool> {
    (0..1u32 << n).map(|a| eval_f(f, a)).collect()
}

fn build(m: &mut Manager, f: &F) -> Bdd {
    match f {
        F::Var(v) => m.var(VarId(*v)),
        F::Const(b) => m.constant(*b),
        F::Not(x) => {
            let x = build(m, x);
            m.negate(x).unwrap()
        }
        F::Bin(op, x, y) => {
            let (x, y) = (build(m, x), build(m, y));
            m.apply(*op, x, y).unwrap()
        }
    }
}

fn bdd_table(m: &Manager, b: Bdd, n: u32) -> Vec<bool> {
    (0..1u32 << n)
        .map(|a| {
            let asg: Vec<bool> = (0..m.num_vars()).map(|v| a >> v & 1 == 1).collect();
            m.eval(b, &asg)
        })
        .collect()
}

fn arb_op() -> impl Strategy<Value = BinOp> {
    prop_oneof![
        Just(BinOp::And),
        Just(BinOp::Or),
        Just(BinOp::Xor),
        Just(BinOp::Implies),
        Just(BinOp::Iff)
    ]
}

fn arb_formula(nvars: u32) -> impl Strategy<Value = F> {
    let leaf = prop_oneof![(0..nvars).prop_map(F::Var), any::<bool>().prop_map(F::Const)];
    leaf.prop_recursive(5, 40, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|x| F::Not(Box::new(x))),
            (arb_op(), inner.clone(), inner).prop_map(|(o, x, y)| F::Bin(o, Box::new(x), Box::new(y))),
        ]
    })
}

#[test]
fn mk_var_truth_table_and_hash_consing() {
    let mut m = Manager::new(1);
    let x = m.mk_var(VarId(0)).unwrap();
    assert_eq!(bdd_table(&m, x, 1), vec![false, true]);
    let y = m.mk_var(VarId(0)).unwrap();
    assert_eq!(x.root(), y.root());
}

#[test]
fn and_of_two_vars() {
    let mut m = Manager::new(2);
    let x0 = m.var(VarId(0));
    let x1 = m.var(VarId(1));
    let a = m.apply(BinOp::And, x0, x1).unwrap();
    assert_eq!(bdd_table(&m, a, 2), vec![false, false, false, true]);
}

#[test]
fn contradiction_and_identity() {
    let mut m = Manager::new(3);
    let x = m.var(VarId(1));
    let nx = m.negate(x).unwrap();
    assert!(m.apply(BinOp::And, x, nx).unwrap().is_false());
    let f = m.ff();
    assert_eq!(m.apply(BinOp::Or, x, f).unwrap(), x);
}

#[test]
fn out_of_range_and_mismatch_errors() {
    let mut m = Manager::new(2);
    assert_eq!(m.mk_var(VarId(2)), Err(BddError::VarOutOfRange { var: 2, num_vars: 2 }));
    let mut other = Manager::new(2);
    let foreign = other.var(VarId(0));
    let x = m.var(VarId(0));
    assert!(matches!(m.apply(BinOp::And, x, foreign), Err(BddError::ManagerMismatch { .. })));
    assert!(matches!(m.swap_prime(foreign), Err(BddError::ManagerMismatch { .. })));
}

#[test]
fn exists_eliminates_conjunct() {
    let mut m = Manager::new(2);
    let x = m.var(VarId(0));
    let y = m.var(VarId(1));
    let xy = m.and(x, y);
    assert_eq!(m.exists(&[VarId(0)], xy).unwrap(), y);
    assert!(m.forall(&[VarId(0)], xy).unwrap().is_false());
}

#[test]
fn swap_prime_moves_variables() {
    let mut m = Manager::new(4);
    let x0 = m.var(VarId(0));
    let x3 = m.var(VarId(3));
    let f = m.and(x0, x3);
    let g = m.swap(f);
    let x1 = m.var(VarId(1));
    let x2 = m.var(VarId(2));
    let expect = m.and(x1, x2);
    assert_eq!(g, expect);
}

#[test]
fn sat_count_and_pick() {
    let mut m = Manager::new(4);
    let x1 = m.var(VarId(1));
    let x3 = m.var(VarId(3));
    let f = m.or(x1, x3);
    let all: Vec<VarId> = (0..4).map(VarId).collect();
    assert_eq!(m.sat_count(f, &all).unwrap(), 12);
    assert_eq!(m.sat_count(f, &[VarId(1), VarId(3)]).unwrap(), 3);
    assert!(m.sat_count(f, &[VarId(1)]).is_err());
    assert_eq!(m.pick_assignment(f).unwrap(), vec![false, false, false, true]);
    assert_eq!(m.pick_assignment(m.ff()), None);
}

#[test]
fn all_sat_expands_dont_cares() {
    let mut m = Manager::new(3);
    let x2 = m.var(VarId(2));
    let sols = m.all_sat(x2, &[VarId(2), VarId(0)]);
    assert_eq!(sols, vec![vec![true, false], vec![true, true]]);
}

#[test]
fn and_exists_matches_two_step() {
    let mut m = Manager::new(6);
    let v: Vec<Bdd> = (0..6).map(|i| m.var(VarId(i))).collect();
    let a = m.or(v[0], v[3]);
    let a = m.xor(a, v[5]);
    let b = m.iff(v[1], v[3]);
    let b = m.and(b, v[4]);
    let cube = m.cube(&[VarId(3), VarId(4)]);
    let ab = m.and(a, b);
    let two = m.exists_cube(cube, ab);
    assert_eq!(m.and_exists(a, b, cube), two);
}

#[test]
fn thousand_random_formulas_match_truth_tables() {
    // Deterministic generation so the count is exact.
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strat = (1u32..=5).prop_flat_map(|n| (Just(n), arb_formula(n), arb_formula(n)));
    let mut m = Manager::new(5);
    for _ in 0..1000 {
        let (n, f, g) = strat.new_tree(&mut runner).unwrap().current();
        let bf = build(&mut m, &f);
        let tf = table(&f, n);
        assert_eq!(bdd_table(&m, bf, n), tf);
        let bg = build(&mut m, &g);
        let tg = table(&g, n);
        // Canonicity: equal tables iff equal roots.
        assert_eq!(tf == tg, bf == bg);
    }
    m.check_invariants().unwrap();
}

proptest! {
    #[test]
    fn apply_matches_truth_table(f in arb_formula(5), g in arb_formula(5), op in arb_op()) {
        let mut m = Manager::new(5);
        let (bf, bg) = (build(&mut m, &f), build(&mut m, &g));
        let r = m.apply(op, bf, bg).unwrap();
        let expect = table(&F::Bin(op, Box::new(f), Box::new(g)), 5);
        prop_assert_eq!(bdd_table(&m, r, 5), expect);
        prop_assert!(m.check_invariants().is_ok());
    }

    #[test]
    fn ite_matches_truth_table(c in arb_formula(4), t in arb_formula(4), e in arb_formula(4)) {
        let mut m = Manager::new(4);
        let (bc, bt, be) = (build(&mut m, &c), build(&mut m, &t), build(&mut m, &e));
        let r = m.ite(bc, bt, be).unwrap();
        let (tc, tt, te) = (table(&c, 4), table(&t, 4), table(&e, 4));
        let expect: Vec<bool> = (0..16).map(|i| if tc[i] { tt[i] } else { te[i] }).collect();
        prop_assert_eq!(bdd_table(&m, r, 4), expect);
    }

    #[test]
    fn quantifiers_bound_the_function(f in arb_formula(5), mask in 0u32..32) {
        let mut m = Manager::new(5);
        let b = build(&mut m, &f);
        let vars: Vec<VarId> = (0..5).filter(|v| mask >> v & 1 == 1).map(VarId).collect();
        let ex = m.exists(&vars, b).unwrap();
        let fa = m.forall(&vars, b).unwrap();
        prop_assert!(m.leq(b, ex));
        prop_assert!(m.leq(fa, b));
        // Oracle: explicit quantification over the table.
        let t = table(&f, 5);
        let tex = bdd_table(&m, ex, 5);
        for a in 0..32u32 {
            let free = a & !mask;
            let any = (0..32u32).filter(|x| x & !mask == 0).any(|x| t[(free | x) as usize]);
            prop_assert_eq!(tex[a as usize], any);
        }
    }

    #[test]
    fn swap_is_an_involution(f in arb_formula(4)) {
        let mut m = Manager::new(4);
        let b = build(&mut m, &f);
        let s = m.swap_prime(b).unwrap();
        prop_assert_eq!(m.swap_prime(s).unwrap(), b);
        // Oracle: swapping variable bits in the table index.
        let t = table(&f, 4);
        let ts = bdd_table(&m, s, 4);
        for a in 0..16u32 {
            let sw = ((a & 0b0101) << 1) | ((a & 0b1010) >> 1);
            prop_assert_eq!(ts[a as usize], t[sw as usize]);
        }
    }

    #[test]
    fn sat_count_matches_enumeration(f in arb_formula(5)) {
        let mut m = Manager::new(5);
        let b = build(&mut m, &f);
        let all: Vec<VarId> = (0..5).map(VarId).collect();
        let expect = table(&f, 5).iter().filter(|x| **x).count() as u128;
        prop_assert_eq!(m.sat_count(b, &all).unwrap(), expect);
        match m.pick_assignment(b) {
            None => prop_assert_eq!(expect, 0),
            Some(a) => {
                prop_assert!(m.eval(b, &a));
                // least in the order x0 < x1 < ... with false < true
                let idx = |a: &[bool]| a.iter().enumerate().fold(0u32, |acc, (i, v)| acc | (*v as u32) << (4 - i));
                let best = (0..32u32).filter(|x| {
                    let asg: Vec<bool> = (0..5).map(|v| x >> (4 - v) & 1 == 1).collect();
                    m.eval(b, &asg)
                }).min().unwrap();
                prop_assert_eq!(idx(&a), best);
            }
        }
    }
}
