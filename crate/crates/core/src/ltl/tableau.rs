//! LTL satisfiability by tableau expansion into a transition-based
//! generalized Büchi automaton, followed by an SCC emptiness check.
//!
//! A tableau state is a set of formulas (in negation normal form) that must
//! hold now. Expanding a state yields atoms: a consistent set of literals,
//! the formulas that must hold next, and the `U` formulas whose fulfilment
//! was postponed. An edge is accepting for `φ U ψ` unless it postpones it.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::ltl::formula::Ltl;
use crate::ltl::structure::LinearStructure;

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome<P> {
    Sat(LinearStructure<P>),
    Unsat,
    /// The tableau grew past the node budget; nothing is known.
    BudgetExceeded {
        explored: usize,
    },
}

type Id = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(u32, bool),
    And(Vec<Id>),
    Or(Vec<Id>),
    Next(Id),
    Until(Id, Id),
    Release(Id, Id),
}

struct Arena<P> {
    nodes: Vec<Node>,
    index: HashMap<Node, Id>,
    props: Vec<P>,
    prop_index: HashMap<P, u32>,
    untils: HashMap<Id, usize>,
}

const TRUE: Id = 0;
const FALSE: Id = 1;

impl<P: Clone + Eq + Hash> Arena<P> {
    fn new() -> Self {
        let mut a = Arena {
            nodes: Vec::new(),
            index: HashMap::new(),
            props: Vec::new(),
            prop_index: HashMap::new(),
            untils: HashMap::new(),
        };
        a.intern(Node::True);
        a.intern(Node::False);
        a
    }

    fn intern(&mut self, n: Node) -> Id {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len() as Id;
        if let Node::Until(..) = n {
            let k = self.untils.len();
            self.untils.insert(id, k);
        }
        self.nodes.push(n.clone());
        self.index.insert(n, id);
        id
    }

    fn lit(&mut self, p: &P, pos: bool) -> Id {
        let k = match self.prop_index.get(p) {
            Some(&k) => k,
            None => {
                let k = self.props.len() as u32;
                self.props.push(p.clone());
                self.prop_index.insert(p.clone(), k);
                k
            }
        };
        self.intern(Node::Lit(k, !pos));
        self.intern(Node::Lit(k, pos))
    }

    fn junction(&mut self, conj: bool, items: Vec<Id>) -> Id {
        let (unit, zero) = if conj { (TRUE, FALSE) } else { (FALSE, TRUE) };
        let mut flat = Vec::new();
        for i in items {
            if i == zero {
                return zero;
            }
            if i == unit {
                continue;
            }
            match &self.nodes[i as usize] {
                Node::And(v) if conj => flat.extend(v.iter().copied()),
                Node::Or(v) if !conj => flat.extend(v.iter().copied()),
                _ => flat.push(i),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        match flat.len() {
            0 => unit,
            1 => flat[0],
            _ if conj => self.intern(Node::And(flat)),
            _ => self.intern(Node::Or(flat)),
        }
    }

    fn next(&mut self, a: Id) -> Id {
        if a == TRUE || a == FALSE {
            a
        } else {
            self.intern(Node::Next(a))
        }
    }

    fn until(&mut self, a: Id, b: Id) -> Id {
        if b == TRUE || b == FALSE || a == FALSE {
            b
        } else {
            self.intern(Node::Until(a, b))
        }
    }

    fn release(&mut self, a: Id, b: Id) -> Id {
        if b == TRUE || b == FALSE || a == TRUE {
            b
        } else {
            self.intern(Node::Release(a, b))
        }
    }

    /// Negation normal form of `f` (of `¬f` when `pos` is false).
    fn nnf(&mut self, f: &Ltl<P>, pos: bool) -> Id {
        match f {
            Ltl::True => {
                if pos {
                    TRUE
                } else {
                    FALSE
                }
            }
            Ltl::False => {
                if pos {
                    FALSE
                } else {
                    TRUE
                }
            }
            Ltl::Prop(p) => self.lit(p, pos),
            Ltl::Not(a) => self.nnf(a, !pos),
            Ltl::And(v) => {
                let items = v.iter().map(|x| self.nnf(x, pos)).collect();
                self.junction(pos, items)
            }
            Ltl::Or(v) => {
                let items = v.iter().map(|x| self.nnf(x, pos)).collect();
                self.junction(!pos, items)
            }
            Ltl::Implies(a, b) => {
                let x = self.nnf(a, !pos);
                let y = self.nnf(b, pos);
                self.junction(!pos, vec![x, y])
            }
            Ltl::Iff(a, b) => {
                let (ap, an) = (self.nnf(a, true), self.nnf(a, false));
                let (bp, bn) = (self.nnf(b, true), self.nnf(b, false));
                if pos {
                    let l = self.junction(false, vec![an, bp]);
                    let r = self.junction(false, vec![ap, bn]);
                    self.junction(true, vec![l, r])
                } else {
                    let l = self.junction(true, vec![ap, bn]);
                    let r = self.junction(true, vec![an, bp]);
                    self.junction(false, vec![l, r])
                }
            }
            Ltl::Next(a) => {
                let x = self.nnf(a, pos);
                self.next(x)
            }
            Ltl::Always(a) => {
                let x = self.nnf(a, pos);
                if pos {
                    self.release(FALSE, x)
                } else {
                    self.until(TRUE, x)
                }
            }
            Ltl::Eventually(a) => {
                let x = self.nnf(a, pos);
                if pos {
                    self.until(TRUE, x)
                } else {
                    self.release(FALSE, x)
                }
            }
            Ltl::Until(a, b) => {
                let x = self.nnf(a, pos);
                let y = self.nnf(b, pos);
                if pos {
                    self.until(x, y)
                } else {
                    self.release(x, y)
                }
            }
        }
    }

    fn negated_lit(&self, id: Id) -> Option<Id> {
        match self.nodes[id as usize] {
            Node::Lit(k, b) => self.index.get(&Node::Lit(k, !b)).copied(),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    T,
    F,
    U,
}

#[derive(Clone)]
struct Branch {
    lits: Vec<i8>,
    pending: Vec<Id>,
    seen: HashSet<Id>,
    next: BTreeSet<Id>,
    postponed: BTreeSet<usize>,
}

struct Atom {
    lits: Vec<(u32, bool)>,
    next: Vec<Id>,
    postponed: BTreeSet<usize>,
}

struct Expander<'a, P> {
    arena: &'a Arena<P>,
    out: Vec<Atom>,
    keys: HashSet<(Vec<Id>, BTreeSet<usize>)>,
    steps: usize,
    budget: usize,
}

enum Choice {
    Items(Vec<Id>),
    Postpone { items: Vec<Id>, until: Id },
}

impl<P: Clone + Eq + Hash> Expander<'_, P> {
    fn val(&self, b: &Branch, id: Id) -> Val {
        match &self.arena.nodes[id as usize] {
            Node::True => Val::T,
            Node::False => Val::F,
            Node::Lit(k, pos) => match b.lits[*k as usize] {
                0 => Val::U,
                v => {
                    if (v > 0) == *pos {
                        Val::T
                    } else {
                        Val::F
                    }
                }
            },
            Node::And(v) => {
                let mut all = true;
                for &c in v {
                    match self.val(b, c) {
                        Val::F => return Val::F,
                        Val::U => all = false,
                        Val::T => {}
                    }
                }
                if all {
                    Val::T
                } else {
                    Val::U
                }
            }
            Node::Or(v) => {
                let mut none = true;
                for &c in v {
                    match self.val(b, c) {
                        Val::T => return Val::T,
                        Val::U => none = false,
                        Val::F => {}
                    }
                }
                if none {
                    Val::F
                } else {
                    Val::U
                }
            }
            Node::Next(_) => Val::U,
            Node::Until(x, y) => match (self.val(b, *x), self.val(b, *y)) {
                (_, Val::T) => Val::T,
                (Val::F, Val::F) => Val::F,
                _ => Val::U,
            },
            Node::Release(x, y) => match (self.val(b, *x), self.val(b, *y)) {
                (_, Val::F) => Val::F,
                (Val::T, Val::T) => Val::T,
                _ => Val::U,
            },
        }
    }

    /// The ways a branching item can be satisfied, given the literals so far.
    fn choices(&self, b: &Branch, id: Id) -> Vec<Choice> {
        match &self.arena.nodes[id as usize] {
            Node::Or(v) => {
                let mut out = Vec::new();
                let mut earlier = Vec::new();
                for &c in v {
                    if self.val(b, c) == Val::F {
                        continue;
                    }
                    let mut items = vec![c];
                    items.extend(earlier.iter().copied());
                    out.push(Choice::Items(items));
                    if let Some(neg) = self.arena.negated_lit(c) {
                        earlier.push(neg);
                    }
                }
                out
            }
            Node::Until(x, y) => {
                let mut out = Vec::new();
                if self.val(b, *y) != Val::F {
                    out.push(Choice::Items(vec![*y]));
                }
                if self.val(b, *x) != Val::F {
                    let mut items = vec![*x];
                    if let Some(neg) = self.arena.negated_lit(*y) {
                        items.push(neg);
                    }
                    out.push(Choice::Postpone { items, until: id });
                }
                out
            }
            Node::Release(x, y) => {
                let mut out = Vec::new();
                if self.val(b, *x) != Val::F {
                    out.push(Choice::Items(vec![*x, *y]));
                }
                out.push(Choice::Postpone {
                    items: vec![*y],
                    until: id,
                });
                out
            }
            _ => unreachable!("only disjunctive nodes branch"),
        }
    }

    fn apply(&self, b: &mut Branch, c: Choice) {
        match c {
            Choice::Items(items) => b.pending.extend(items),
            Choice::Postpone { items, until } => {
                b.pending.extend(items);
                b.next.insert(until);
                if let Some(&k) = self.arena.untils.get(&until) {
                    b.postponed.insert(k);
                }
            }
        }
    }

    /// Processes every non-branching item; `false` on contradiction.
    fn propagate(&self, b: &mut Branch, branching: &mut Vec<Id>) -> bool {
        loop {
            let mut progress = false;
            let work: Vec<Id> = std::mem::take(&mut b.pending)
                .into_iter()
                .chain(branching.drain(..))
                .collect();
            for id in work {
                if b.seen.contains(&id) {
                    continue;
                }
                match self.val(b, id) {
                    Val::T => {
                        b.seen.insert(id);
                        continue;
                    }
                    Val::F => return false,
                    Val::U => {}
                }
                match &self.arena.nodes[id as usize] {
                    Node::Lit(k, pos) => {
                        b.lits[*k as usize] = if *pos { 1 } else { -1 };
                        b.seen.insert(id);
                        progress = true;
                    }
                    Node::And(v) => {
                        b.pending.extend(v.iter().copied());
                        b.seen.insert(id);
                        progress = true;
                    }
                    Node::Next(x) => {
                        b.next.insert(*x);
                        b.seen.insert(id);
                    }
                    Node::Release(x, y) if *x == FALSE => {
                        b.pending.push(*y);
                        b.next.insert(id);
                        b.seen.insert(id);
                        progress = true;
                    }
                    _ => {
                        let mut cs = self.choices(b, id);
                        match cs.len() {
                            0 => return false,
                            1 => {
                                b.seen.insert(id);
                                self.apply(b, cs.pop().unwrap());
                                progress = true;
                            }
                            _ => branching.push(id),
                        }
                    }
                }
            }
            if !progress && b.pending.is_empty() {
                return true;
            }
        }
    }

    fn expand(&mut self, mut b: Branch, mut branching: Vec<Id>) -> bool {
        self.steps += 1;
        if self.steps > self.budget {
            return false;
        }
        if !self.propagate(&mut b, &mut branching) {
            return true;
        }
        branching.retain(|id| !b.seen.contains(id));
        if branching.is_empty() {
            let next: Vec<Id> = b.next.iter().copied().collect();
            if self.keys.insert((next.clone(), b.postponed.clone())) {
                let lits = b
                    .lits
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(k, v)| (k as u32, *v > 0))
                    .collect();
                self.out.push(Atom {
                    lits,
                    next,
                    postponed: b.postponed,
                });
            }
            return true;
        }
        let (pick, _) = branching
            .iter()
            .enumerate()
            .map(|(i, &id)| (i, self.choices(&b, id).len()))
            .min_by_key(|(_, n)| *n)
            .unwrap();
        let id = branching.swap_remove(pick);
        for c in self.choices(&b, id) {
            let mut child = b.clone();
            child.seen.insert(id);
            self.apply(&mut child, c);
            if !self.expand(child, branching.clone()) {
                return false;
            }
        }
        true
    }
}

struct Edge {
    target: usize,
    atom: usize,
}

struct Graph {
    states: Vec<Vec<Id>>,
    atoms: Vec<Atom>,
    edges: Vec<Vec<Edge>>,
}

fn accepting_for(atom: &Atom, k: usize) -> bool {
    !atom.postponed.contains(&k)
}

/// Iterative Tarjan; returns SCCs as vectors of state indices.
fn sccs(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.states.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei < g.edges[v].len() {
                let w = g.edges[v][*ei].target;
                *ei += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Shortest path (as edge list `(state, edge index)`) from `from` to any state
/// satisfying `goal`, moving only through `allowed` states.
fn bfs(
    g: &Graph,
    from: usize,
    allowed: &dyn Fn(usize) -> bool,
    goal: &dyn Fn(usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(v) = queue.pop_front() {
        for (i, e) in g.edges[v].iter().enumerate() {
            if !allowed(e.target) || !seen.insert(e.target) {
                continue;
            }
            parent.insert(e.target, (v, i));
            if goal(e.target) {
                let mut path = Vec::new();
                let mut cur = e.target;
                while cur != from {
                    let (p, i) = parent[&cur];
                    path.push((p, i));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(e.target);
        }
    }
    None
}

/// Decides satisfiability of `f`. The witness, if any, satisfies `f` at
/// position 0; propositions not forced either way are false.
pub fn ltl_sat<P: Clone + Ord + Hash>(f: &Ltl<P>, budget: usize) -> SatOutcome<P> {
    let mut arena = Arena::new();
    let root = arena.nnf(f, true);
    let num_untils = arena.untils.len();
    let mut g = Graph {
        states: Vec::new(),
        atoms: Vec::new(),
        edges: Vec::new(),
    };
    let mut index: HashMap<Vec<Id>, usize> = HashMap::new();
    let init = vec![root];
    index.insert(init.clone(), 0);
    g.states.push(init);
    g.edges.push(Vec::new());
    let mut explored = 0usize;
    let mut i = 0;
    while i < g.states.len() {
        let items = g.states[i].clone();
        let mut ex = Expander {
            arena: &arena,
            out: Vec::new(),
            keys: HashSet::new(),
            steps: 0,
            budget: budget.saturating_sub(explored),
        };
        let branch = Branch {
            lits: vec![0; arena.props.len()],
            pending: items,
            seen: HashSet::new(),
            next: BTreeSet::new(),
            postponed: BTreeSet::new(),
        };
        let finished = ex.expand(branch, Vec::new());
        explored += ex.steps + 1;
        if !finished || explored > budget {
            return SatOutcome::BudgetExceeded { explored };
        }
        for atom in ex.out {
            let target = match index.get(&atom.next) {
                Some(&t) => t,
                None => {
                    let t = g.states.len();
                    index.insert(atom.next.clone(), t);
                    g.states.push(atom.next.clone());
                    g.edges.push(Vec::new());
                    t
                }
            };
            g.edges[i].push(Edge {
                target,
                atom: g.atoms.len(),
            });
            g.atoms.push(atom);
        }
        i += 1;
    }

    for comp in sccs(&g) {
        let members: HashSet<usize> = comp.iter().copied().collect();
        let internal: Vec<(usize, usize)> = comp
            .iter()
            .flat_map(|&v| {
                g.edges[v]
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| members.contains(&e.target))
                    .map(move |(k, _)| (v, k))
            })
            .collect();
        if internal.is_empty() {
            continue;
        }
        let covers = (0..num_untils).all(|k| {
            internal
                .iter()
                .any(|&(v, e)| accepting_for(&g.atoms[g.edges[v][e].atom], k))
        });
        if !covers {
            continue;
        }
        return SatOutcome::Sat(witness(&g, &arena, &members, &internal, num_untils));
    }
    SatOutcome::Unsat
}

fn witness<P: Clone + Ord + Hash>(
    g: &Graph,
    arena: &Arena<P>,
    members: &HashSet<usize>,
    internal: &[(usize, usize)],
    num_untils: usize,
) -> LinearStructure<P> {
    let entry_goal = |v: usize| members.contains(&v);
    let mut prefix: Vec<(usize, usize)> = Vec::new();
    let mut entry = 0;
    if !members.contains(&0) {
        prefix = bfs(g, 0, &|_| true, &entry_goal).expect("accepting component is reachable");
        let (v, e) = *prefix.last().unwrap();
        entry = g.edges[v][e].target;
    }
    let inside = |v: usize| members.contains(&v);
    let mut cycle: Vec<(usize, usize)> = Vec::new();
    let mut cur = entry;
    for k in 0..num_untils {
        let &(v, e) = internal
            .iter()
            .find(|&&(v, e)| accepting_for(&g.atoms[g.edges[v][e].atom], k))
            .expect("component covers every eventuality");
        if v != cur {
            cycle.extend(bfs(g, cur, &inside, &|x| x == v).expect("strongly connected"));
        }
        cycle.push((v, e));
        cur = g.edges[v][e].target;
    }
    if cycle.is_empty() {
        let &(v, e) = internal
            .iter()
            .find(|&&(v, _)| v == cur)
            .expect("nontrivial component");
        cycle.push((v, e));
        cur = g.edges[v][e].target;
    }
    if cur != entry {
        cycle.extend(bfs(g, cur, &inside, &|x| x == entry).expect("strongly connected"));
    }
    let label = |&(v, e): &(usize, usize)| -> BTreeSet<P> {
        g.atoms[g.edges[v][e].atom]
            .lits
            .iter()
            .filter(|(_, b)| *b)
            .map(|(k, _)| arena.props[*k as usize].clone())
            .collect()
    };
    let loop_start = prefix.len();
    let labels = prefix.iter().chain(cycle.iter()).map(label).collect();
    LinearStructure::new(labels, loop_start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::structure::ltl_eval;

    type F = Ltl<&'static str>;

    fn p(s: &'static str) -> F {
        Ltl::prop(s)
    }

    fn sat(f: &F) -> Option<LinearStructure<&'static str>> {
        match ltl_sat(f, DEFAULT_BUDGET) {
            SatOutcome::Sat(m) => {
                assert!(ltl_eval(&m, 0, f), "witness must satisfy the formula");
                Some(m)
            }
            SatOutcome::Unsat => None,
            SatOutcome::BudgetExceeded { .. } => panic!("budget"),
        }
    }

    #[test]
    fn basic_cases() {
        assert!(sat(&Ltl::and(
            Ltl::always(p("p")),
            Ltl::eventually(Ltl::not(p("p")))
        ))
        .is_none());
        let m = sat(&Ltl::until(p("p"), p("q"))).unwrap();
        assert!((0..m.labels.len()).any(|t| m.holds(t, &"q")));
        assert!(sat(&Ltl::and(p("p"), Ltl::not(p("p")))).is_none());
        assert!(sat(&Ltl::True).is_some());
        assert!(sat(&Ltl::False).is_none());
    }

    #[test]
    fn eventualities_need_fair_cycles() {
        let f = Ltl::all([
            Ltl::always(Ltl::eventually(p("p"))),
            Ltl::always(Ltl::eventually(Ltl::not(p("p")))),
            Ltl::always(Ltl::implies(p("p"), Ltl::next(Ltl::not(p("p"))))),
        ]);
        let m = sat(&f).unwrap();
        assert!(m.labels.len() - m.loop_start >= 2);
        let g = Ltl::and(
            Ltl::always(Ltl::eventually(p("p"))),
            Ltl::eventually(Ltl::always(Ltl::not(p("p")))),
        );
        assert!(sat(&g).is_none());
    }

    #[test]
    fn until_chains() {
        let f = Ltl::all([
            Ltl::until(
                p("a"),
                Ltl::and(p("b"), Ltl::next(Ltl::until(p("c"), p("d")))),
            ),
            Ltl::always(Ltl::not(Ltl::and(p("a"), p("b")))),
            Ltl::next(Ltl::next(Ltl::not(p("d")))),
        ]);
        sat(&f).unwrap();
    }

    #[test]
    fn release_semantics() {
        let r = Ltl::not(Ltl::until(Ltl::not(p("a")), Ltl::not(p("b"))));
        let f = Ltl::and(r, Ltl::eventually(Ltl::not(p("b"))));
        let m = sat(&f).unwrap();
        let first_not_b = (0..m.labels.len()).find(|&t| !m.holds(t, &"b")).unwrap();
        assert!((0..first_not_b).any(|t| m.holds(t, &"a")));
    }

    #[test]
    fn budget_is_reported() {
        let f = Ltl::all((0..12).map(|i| {
            Ltl::always(Ltl::eventually(Ltl::prop(
                ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"][i],
            )))
        }));
        assert!(matches!(ltl_sat(&f, 5), SatOutcome::BudgetExceeded { .. }));
    }
}
