//! Reduced ordered binary decision diagrams.
//!
//! A [`Manager`] owns a hash-consed node table and an operation cache.
//! [`Bdd`] values are small copyable handles tagged with the id of the
//! manager that created them. Variables are identified by [`VarId`]; the
//! order is the numeric order of the ids and never changes.
//!
//! Transition-relation helpers assume the interleaved layout used by the
//! rest of the crate: variable `2i` is the current copy of proposition `i`
//! and `2i + 1` is its primed copy.

mod cache;

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use rustc_hash::FxHashMap;

use cache::{Cache, Op};

/// Position of a variable in the fixed global order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    /// Primed partner in the interleaved layout.
    pub fn primed(self) -> VarId {
        VarId(self.0 | 1)
    }

    /// Unprimed partner in the interleaved layout.
    pub fn unprimed(self) -> VarId {
        VarId(self.0 & !1)
    }

    pub fn is_primed(self) -> bool {
        self.0 & 1 == 1
    }
}

/// Handle to a function stored in a [`Manager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bdd {
    root: u32,
    mgr: u32,
}

impl Bdd {
    /// Raw node index. Equal functions in one manager share an index.
    pub fn root(self) -> u32 {
        self.root
    }

    pub fn is_false(self) -> bool {
        self.root == FALSE
    }

    pub fn is_true(self) -> bool {
        self.root == TRUE
    }

    pub fn is_const(self) -> bool {
        self.root <= TRUE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BddError {
    #[error("variable {var} out of range (manager has {num_vars} variables)")]
    VarOutOfRange { var: u32, num_vars: u32 },
    #[error("BDD belongs to manager {found}, expected manager {expected}")]
    ManagerMismatch { expected: u32, found: u32 },
    #[error("sat_count over {0} variables does not fit in 128 bits")]
    CountOverflow(usize),
    #[error("function depends on variable {0} outside the counting set")]
    SupportNotCovered(u32),
}

const FALSE: u32 = 0;
const TRUE: u32 = 1;
const TERMINAL_VAR: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: u32,
    hi: u32,
}

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

/// Node table, unique table and computed cache for one variable order.
///
/// A manager is not `Sync`; use one per thread.
pub struct Manager {
    id: u32,
    num_vars: u32,
    nodes: Vec<Node>,
    unique: FxHashMap<Node, u32>,
    cache: Cache,
}

impl fmt::Debug for Manager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Manager")
            .field("id", &self.id)
            .field("num_vars", &self.num_vars)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl Manager {
    pub fn new(num_vars: u32) -> Self {
        let terminal = |v| Node { var: TERMINAL_VAR, lo: v, hi: v };
        Manager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            num_vars,
            nodes: vec![terminal(FALSE), terminal(TRUE)],
            unique: FxHashMap::default(),
            cache: Cache::new(1 << 16),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Total nodes allocated, terminals included.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn wrap(&self, root: u32) -> Bdd {
        Bdd { root, mgr: self.id }
    }

    fn check(&self, b: Bdd) -> Result<u32, BddError> {
        if b.mgr == self.id {
            Ok(b.root)
        } else {
            Err(BddError::ManagerMismatch { expected: self.id, found: b.mgr })
        }
    }

    fn own(&self, b: Bdd) -> u32 {
        match self.check(b) {
            Ok(r) => r,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn constant(&self, value: bool) -> Bdd {
        self.wrap(if value { TRUE } else { FALSE })
    }

    pub fn tt(&self) -> Bdd {
        self.constant(true)
    }

    pub fn ff(&self) -> Bdd {
        self.constant(false)
    }

    /// The projection function of `v`.
    pub fn mk_var(&mut self, v: VarId) -> Result<Bdd, BddError> {
        if v.0 >= self.num_vars {
            return Err(BddError::VarOutOfRange { var: v.0, num_vars: self.num_vars });
        }
        let r = self.mk(v.0, FALSE, TRUE);
        Ok(self.wrap(r))
    }

    /// Like [`Manager::mk_var`] but panics on an out-of-range id.
    pub fn var(&mut self, v: VarId) -> Bdd {
        self.mk_var(v).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn nvar(&mut self, v: VarId) -> Bdd {
        let x = self.var(v);
        self.not(x)
    }

    /// Literal for `v` with the given polarity.
    pub fn literal(&mut self, v: VarId, value: bool) -> Bdd {
        if value {
            self.var(v)
        } else {
            self.nvar(v)
        }
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&idx) = self.unique.get(&node) {
            return idx;
        }
        let idx = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, idx);
        if self.nodes.len() > self.cache.capacity() * 4 {
            self.cache.grow();
        }
        idx
    }

    #[inline]
    fn node(&self, r: u32) -> Node {
        self.nodes[r as usize]
    }

    #[inline]
    fn level(&self, r: u32) -> u32 {
        self.nodes[r as usize].var
    }

    #[inline]
    fn cofactors(&self, r: u32, var: u32) -> (u32, u32) {
        let n = self.node(r);
        if n.var == var {
            (n.lo, n.hi)
        } else {
            (r, r)
        }
    }

    // ---- boolean operations -------------------------------------------

    pub fn apply(&mut self, op: BinOp, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        let r = match op {
            BinOp::And => self.and_rec(a, b),
            BinOp::Or => self.or_rec(a, b),
            BinOp::Xor => self.xor_rec(a, b),
            BinOp::Implies => {
                let na = self.not_rec(a);
                self.or_rec(na, b)
            }
            BinOp::Iff => {
                let x = self.xor_rec(a, b);
                self.not_rec(x)
            }
        };
        Ok(self.wrap(r))
    }

    pub fn negate(&mut self, a: Bdd) -> Result<Bdd, BddError> {
        let a = self.check(a)?;
        let r = self.not_rec(a);
        Ok(self.wrap(r))
    }

    pub fn not(&mut self, a: Bdd) -> Bdd {
        let a = self.own(a);
        let r = self.not_rec(a);
        self.wrap(r)
    }

    pub fn and(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let (a, b) = (self.own(a), self.own(b));
        let r = self.and_rec(a, b);
        self.wrap(r)
    }

    pub fn or(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let (a, b) = (self.own(a), self.own(b));
        let r = self.or_rec(a, b);
        self.wrap(r)
    }

    pub fn xor(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let (a, b) = (self.own(a), self.own(b));
        let r = self.xor_rec(a, b);
        self.wrap(r)
    }

    pub fn implies(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let na = self.not(a);
        self.or(na, b)
    }

    pub fn iff(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let x = self.xor(a, b);
        self.not(x)
    }

    /// `a ∧ ¬b`
    pub fn diff(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let nb = self.not(b);
        self.and(a, nb)
    }

    pub fn and_all<I: IntoIterator<Item = Bdd>>(&mut self, items: I) -> Bdd {
        let mut acc = self.tt();
        for b in items {
            acc = self.and(acc, b);
            if acc.is_false() {
                break;
            }
        }
        acc
    }

    pub fn or_all<I: IntoIterator<Item = Bdd>>(&mut self, items: I) -> Bdd {
        let mut acc = self.ff();
        for b in items {
            acc = self.or(acc, b);
            if acc.is_true() {
                break;
            }
        }
        acc
    }

    /// `a → b` is valid.
    pub fn leq(&mut self, a: Bdd, b: Bdd) -> bool {
        self.diff(a, b).is_false()
    }

    pub fn ite(&mut self, c: Bdd, t: Bdd, e: Bdd) -> Result<Bdd, BddError> {
        let (c, t, e) = (self.check(c)?, self.check(t)?, self.check(e)?);
        let r = self.ite_rec(c, t, e);
        Ok(self.wrap(r))
    }

    fn not_rec(&mut self, a: u32) -> u32 {
        if a <= TRUE {
            return a ^ 1;
        }
        if let Some(r) = self.cache.get(Op::Not, a, 0, 0) {
            return r;
        }
        let n = self.node(a);
        let lo = self.not_rec(n.lo);
        let hi = self.not_rec(n.hi);
        let r = self.mk(n.var, lo, hi);
        self.cache.put(Op::Not, a, 0, 0, r);
        r
    }

    fn and_rec(&mut self, a: u32, b: u32) -> u32 {
        if a == FALSE || b == FALSE {
            return FALSE;
        }
        if a == TRUE || a == b {
            return b;
        }
        if b == TRUE {
            return a;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if let Some(r) = self.cache.get(Op::And, a, b, 0) {
            return r;
        }
        let v = self.level(a).min(self.level(b));
        let (a0, a1) = self.cofactors(a, v);
        let (b0, b1) = self.cofactors(b, v);
        let lo = self.and_rec(a0, b0);
        let hi = self.and_rec(a1, b1);
        let r = self.mk(v, lo, hi);
        self.cache.put(Op::And, a, b, 0, r);
        r
    }

    fn or_rec(&mut self, a: u32, b: u32) -> u32 {
        if a == TRUE || b == TRUE {
            return TRUE;
        }
        if a == FALSE || a == b {
            return b;
        }
        if b == FALSE {
            return a;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if let Some(r) = self.cache.get(Op::Or, a, b, 0) {
            return r;
        }
        let v = self.level(a).min(self.level(b));
        let (a0, a1) = self.cofactors(a, v);
        let (b0, b1) = self.cofactors(b, v);
        let lo = self.or_rec(a0, b0);
        let hi = self.or_rec(a1, b1);
        let r = self.mk(v, lo, hi);
        self.cache.put(Op::Or, a, b, 0, r);
        r
    }

    fn xor_rec(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return FALSE;
        }
        if a == FALSE {
            return b;
        }
        if b == FALSE {
            return a;
        }
        if a == TRUE {
            return self.not_rec(b);
        }
        if b == TRUE {
            return self.not_rec(a);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if let Some(r) = self.cache.get(Op::Xor, a, b, 0) {
            return r;
        }
        let v = self.level(a).min(self.level(b));
        let (a0, a1) = self.cofactors(a, v);
        let (b0, b1) = self.cofactors(b, v);
        let lo = self.xor_rec(a0, b0);
        let hi = self.xor_rec(a1, b1);
        let r = self.mk(v, lo, hi);
        self.cache.put(Op::Xor, a, b, 0, r);
        r
    }

    fn ite_rec(&mut self, c: u32, t: u32, e: u32) -> u32 {
        if c == TRUE || t == e {
            return t;
        }
        if c == FALSE {
            return e;
        }
        if t == TRUE && e == FALSE {
            return c;
        }
        if t == FALSE && e == TRUE {
            return self.not_rec(c);
        }
        if t == TRUE {
            return self.or_rec(c, e);
        }
        if e == FALSE {
            return self.and_rec(c, t);
        }
        if let Some(r) = self.cache.get(Op::Ite, c, t, e) {
            return r;
        }
        let v = self.level(c).min(self.level(t)).min(self.level(e));
        let (c0, c1) = self.cofactors(c, v);
        let (t0, t1) = self.cofactors(t, v);
        let (e0, e1) = self.cofactors(e, v);
        let lo = self.ite_rec(c0, t0, e0);
        let hi = self.ite_rec(c1, t1, e1);
        let r = self.mk(v, lo, hi);
        self.cache.put(Op::Ite, c, t, e, r);
        r
    }

    // ---- quantification -----------------------------------------------

    /// Positive conjunction of the given variables, used as a quantifier set.
    pub fn cube(&mut self, vars: &[VarId]) -> Bdd {
        let mut vs: Vec<u32> = vars.iter().map(|v| v.0).collect();
        vs.sort_unstable();
        vs.dedup();
        let mut r = TRUE;
        for &v in vs.iter().rev() {
            assert!(v < self.num_vars, "variable {v} out of range");
            r = self.mk(v, FALSE, r);
        }
        self.wrap(r)
    }

    pub fn exists(&mut self, vars: &[VarId], a: Bdd) -> Result<Bdd, BddError> {
        for v in vars {
            if v.0 >= self.num_vars {
                return Err(BddError::VarOutOfRange { var: v.0, num_vars: self.num_vars });
            }
        }
        let a = self.check(a)?;
        let cube = self.cube(vars).root;
        let r = self.exists_rec(a, cube);
        Ok(self.wrap(r))
    }

    pub fn forall(&mut self, vars: &[VarId], a: Bdd) -> Result<Bdd, BddError> {
        let na = self.negate(a)?;
        let e = self.exists(vars, na)?;
        self.negate(e)
    }

    /// `∃ cube. a` where `cube` was built with [`Manager::cube`].
    pub fn exists_cube(&mut self, cube: Bdd, a: Bdd) -> Bdd {
        let (cube, a) = (self.own(cube), self.own(a));
        let r = self.exists_rec(a, cube);
        self.wrap(r)
    }

    pub fn forall_cube(&mut self, cube: Bdd, a: Bdd) -> Bdd {
        let na = self.not(a);
        let e = self.exists_cube(cube, na);
        self.not(e)
    }

    /// Relational product `∃ cube. (a ∧ b)` without building the conjunction.
    pub fn and_exists(&mut self, a: Bdd, b: Bdd, cube: Bdd) -> Bdd {
        let (a, b, cube) = (self.own(a), self.own(b), self.own(cube));
        let r = self.and_exists_rec(a, b, cube);
        self.wrap(r)
    }

    fn exists_rec(&mut self, a: u32, mut cube: u32) -> u32 {
        if a <= TRUE {
            return a;
        }
        let v = self.level(a);
        while cube != TRUE && self.level(cube) < v {
            cube = self.node(cube).hi;
        }
        if cube == TRUE {
            return a;
        }
        if let Some(r) = self.cache.get(Op::Exists, a, cube, 0) {
            return r;
        }
        let n = self.node(a);
        let r = if self.level(cube) == v {
            let rest = self.node(cube).hi;
            let lo = self.exists_rec(n.lo, rest);
            if lo == TRUE {
                TRUE
            } else {
                let hi = self.exists_rec(n.hi, rest);
                self.or_rec(lo, hi)
            }
        } else {
            let lo = self.exists_rec(n.lo, cube);
            let hi = self.exists_rec(n.hi, cube);
            self.mk(v, lo, hi)
        };
        self.cache.put(Op::Exists, a, cube, 0, r);
        r
    }

    fn and_exists_rec(&mut self, a: u32, b: u32, mut cube: u32) -> u32 {
        if a == FALSE || b == FALSE {
            return FALSE;
        }
        if a == TRUE && b == TRUE {
            return TRUE;
        }
        if a == TRUE || a == b {
            return self.exists_rec(b, cube);
        }
        if b == TRUE {
            return self.exists_rec(a, cube);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let v = self.level(a).min(self.level(b));
        while cube != TRUE && self.level(cube) < v {
            cube = self.node(cube).hi;
        }
        if cube == TRUE {
            return self.and_rec(a, b);
        }
        if let Some(r) = self.cache.get(Op::AndExists, a, b, cube) {
            return r;
        }
        let (a0, a1) = self.cofactors(a, v);
        let (b0, b1) = self.cofactors(b, v);
        let r = if self.level(cube) == v {
            let rest = self.node(cube).hi;
            let lo = self.and_exists_rec(a0, b0, rest);
            if lo == TRUE {
                TRUE
            } else {
                let hi = self.and_exists_rec(a1, b1, rest);
                self.or_rec(lo, hi)
            }
        } else {
            let lo = self.and_exists_rec(a0, b0, cube);
            let hi = self.and_exists_rec(a1, b1, cube);
            self.mk(v, lo, hi)
        };
        self.cache.put(Op::AndExists, a, b, cube, r);
        r
    }

    // ---- renaming -----------------------------------------------------

    /// Exchanges every variable `2i` with `2i + 1`.
    pub fn swap_prime(&mut self, a: Bdd) -> Result<Bdd, BddError> {
        let a = self.check(a)?;
        let r = self.swap_rec(a);
        Ok(self.wrap(r))
    }

    pub fn swap(&mut self, a: Bdd) -> Bdd {
        let a = self.own(a);
        let r = self.swap_rec(a);
        self.wrap(r)
    }

    fn swap_rec(&mut self, a: u32) -> u32 {
        if a <= TRUE {
            return a;
        }
        if let Some(r) = self.cache.get(Op::Swap, a, 0, 0) {
            return r;
        }
        let n = self.node(a);
        let lo = self.swap_rec(n.lo);
        let hi = self.swap_rec(n.hi);
        let target = n.var ^ 1;
        let x = self.mk(target, FALSE, TRUE);
        let r = self.ite_rec(x, hi, lo);
        self.cache.put(Op::Swap, a, 0, 0, r);
        r
    }

    /// Restricts variable `v` to `value`.
    pub fn restrict(&mut self, a: Bdd, v: VarId, value: bool) -> Bdd {
        let a = self.own(a);
        let r = self.restrict_rec(a, v.0, value);
        self.wrap(r)
    }

    fn restrict_rec(&mut self, a: u32, v: u32, value: bool) -> u32 {
        if a <= TRUE {
            return a;
        }
        let n = self.node(a);
        if n.var > v {
            return a;
        }
        if n.var == v {
            return if value { n.hi } else { n.lo };
        }
        let op = if value { Op::RestrictHi } else { Op::RestrictLo };
        if let Some(r) = self.cache.get(op, a, v, 0) {
            return r;
        }
        let lo = self.restrict_rec(n.lo, v, value);
        let hi = self.restrict_rec(n.hi, v, value);
        let r = self.mk(n.var, lo, hi);
        self.cache.put(op, a, v, 0, r);
        r
    }

    /// Conjunction of literals fixing `vars` to `values`.
    pub fn minterm(&mut self, vars: &[VarId], values: &[bool]) -> Bdd {
        let mut pairs: Vec<(u32, bool)> = vars.iter().map(|v| v.0).zip(values.iter().copied()).collect();
        pairs.sort_unstable_by_key(|p| p.0);
        let mut r = TRUE;
        for &(v, val) in pairs.iter().rev() {
            r = if val { self.mk(v, FALSE, r) } else { self.mk(v, r, FALSE) };
        }
        self.wrap(r)
    }

    // ---- inspection ---------------------------------------------------

    pub fn eval(&self, a: Bdd, assignment: &[bool]) -> bool {
        let mut r = self.own(a);
        while r > TRUE {
            let n = self.node(r);
            r = if assignment[n.var as usize] { n.hi } else { n.lo };
        }
        r == TRUE
    }

    /// Lexicographically least satisfying assignment over all variables
    /// (false before true, in variable order). `None` iff `a` is false.
    pub fn pick_assignment(&self, a: Bdd) -> Option<Vec<bool>> {
        let mut r = self.own(a);
        if r == FALSE {
            return None;
        }
        let mut out = vec![false; self.num_vars as usize];
        while r > TRUE {
            let n = self.node(r);
            if n.lo != FALSE {
                r = n.lo;
            } else {
                out[n.var as usize] = true;
                r = n.hi;
            }
        }
        Some(out)
    }

    /// Number of assignments to `over` satisfying `a`. The support of `a`
    /// must lie inside `over`.
    pub fn sat_count(&self, a: Bdd, over: &[VarId]) -> Result<u128, BddError> {
        let root = self.check(a)?;
        let mut vars: Vec<u32> = over.iter().map(|v| v.0).collect();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() > 127 {
            return Err(BddError::CountOverflow(vars.len()));
        }
        for v in self.support(a) {
            if vars.binary_search(&v.0).is_err() {
                return Err(BddError::SupportNotCovered(v.0));
            }
        }
        let k = vars.len() as u32;
        let pos = |var: u32| -> u32 {
            if var == TERMINAL_VAR {
                k
            } else {
                vars.binary_search(&var).unwrap() as u32
            }
        };
        let mut memo: FxHashMap<u32, u128> = FxHashMap::default();
        fn count(
            m: &Manager,
            r: u32,
            pos: &dyn Fn(u32) -> u32,
            memo: &mut FxHashMap<u32, u128>,
        ) -> u128 {
            if r == FALSE {
                return 0;
            }
            if r == TRUE {
                return 1;
            }
            if let Some(&c) = memo.get(&r) {
                return c;
            }
            let n = m.node(r);
            let p = pos(n.var);
            let lo = count(m, n.lo, pos, memo) << (pos(m.level(n.lo)) - p - 1);
            let hi = count(m, n.hi, pos, memo) << (pos(m.level(n.hi)) - p - 1);
            let c = lo + hi;
            memo.insert(r, c);
            c
        }
        let c = count(self, root, &pos, &mut memo);
        Ok(c << pos(self.level(root)))
    }

    /// Variables the function depends on, in order.
    pub fn support(&self, a: Bdd) -> Vec<VarId> {
        let root = self.own(a);
        let mut seen = rustc_hash::FxHashSet::default();
        let mut vars = std::collections::BTreeSet::new();
        let mut stack = vec![root];
        while let Some(r) = stack.pop() {
            if r <= TRUE || !seen.insert(r) {
                continue;
            }
            let n = self.node(r);
            vars.insert(n.var);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        vars.into_iter().map(VarId).collect()
    }

    /// Number of internal nodes reachable from `a`.
    pub fn node_count(&self, a: Bdd) -> usize {
        let root = self.own(a);
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![root];
        while let Some(r) = stack.pop() {
            if r <= TRUE || !seen.insert(r) {
                continue;
            }
            let n = self.node(r);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        seen.len()
    }

    /// Enumerates every assignment to `over` (in the given order) that
    /// satisfies `a`. The support of `a` must lie inside `over`.
    pub fn all_sat(&self, a: Bdd, over: &[VarId]) -> Vec<Vec<bool>> {
        let root = self.own(a);
        let mut out = Vec::new();
        let mut cur = vec![false; over.len()];
        let index: FxHashMap<u32, usize> = over.iter().enumerate().map(|(i, v)| (v.0, i)).collect();
        let mut sorted: Vec<(u32, usize)> = over.iter().enumerate().map(|(i, v)| (v.0, i)).collect();
        sorted.sort_unstable();
        self.all_sat_rec(root, 0, &sorted, &index, &mut cur, &mut out);
        out
    }

    fn all_sat_rec(
        &self,
        r: u32,
        k: usize,
        sorted: &[(u32, usize)],
        index: &FxHashMap<u32, usize>,
        cur: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if r == FALSE {
            return;
        }
        if k == sorted.len() {
            debug_assert!(r == TRUE, "support not covered by enumeration set");
            out.push(cur.clone());
            return;
        }
        let (var, slot) = sorted[k];
        let n = self.node(r);
        debug_assert!(n.var == TERMINAL_VAR || index.contains_key(&n.var) || n.var > var);
        let (lo, hi) = if n.var == var { (n.lo, n.hi) } else { (r, r) };
        cur[slot] = false;
        self.all_sat_rec(lo, k + 1, sorted, index, cur, out);
        cur[slot] = true;
        self.all_sat_rec(hi, k + 1, sorted, index, cur, out);
        cur[slot] = false;
    }

    /// Graphviz rendering of a single function, for debugging.
    pub fn to_dot(&self, a: Bdd, names: &dyn Fn(VarId) -> String) -> String {
        let root = self.own(a);
        let mut s = String::from("digraph bdd {\n  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n");
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![root];
        while let Some(r) = stack.pop() {
            if r <= TRUE || !seen.insert(r) {
                continue;
            }
            let n = self.node(r);
            s.push_str(&format!("  n{r} [label=\"{}\"];\n", names(VarId(n.var))));
            s.push_str(&format!("  n{r} -> n{} [style=dashed];\n  n{r} -> n{};\n", n.lo, n.hi));
            stack.push(n.lo);
            stack.push(n.hi);
        }
        s.push_str("}\n");
        s
    }

    /// Checks the structural invariants of the node table.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate().skip(2) {
            if n.lo == n.hi {
                return Err(format!("node {i} has equal children"));
            }
            if self.level(n.lo) <= n.var || self.level(n.hi) <= n.var {
                return Err(format!("node {i} violates the variable order"));
            }
            if self.unique.get(n) != Some(&(i as u32)) {
                return Err(format!("node {i} missing from unique table"));
            }
        }
        if self.unique.len() != self.nodes.len() - 2 {
            return Err("duplicate nodes in table".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
