//! Exact single-loop search over an abstract graph.
//!
//! Every edge is `Unknown`, `In` or `Out`; every vertex is on the loop
//! (`Yes`), off it (`No`) or undecided. Branching always takes the
//! lowest-indexed unknown edge and tries `In` before `Out`, so with edges
//! indexed in canonical order the first solution found is the canonical one.
//!
//! Propagation is layered:
//! - vertex degree: visited vertices end with exactly two loop edges;
//! - path segments: an edge that would close a cycle is only allowed when the
//!   cycle is the whole loop;
//! - bridges: a loop never uses a bridge of the still-available graph, and all
//!   visited vertices must share one component;
//! - genre rules ([`Rule`]).

use std::time::Instant;

/// Simple undirected graph with edges in a fixed index order.
#[derive(Debug, Clone, Default)]
pub struct LoopGraph {
    ends: Vec<[u32; 2]>,
    incident: Vec<Vec<u32>>,
}

impl LoopGraph {
    pub fn new(vertex_count: usize) -> Self {
        LoopGraph { ends: Vec::new(), incident: vec![Vec::new(); vertex_count] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> u32 {
        let id = self.ends.len() as u32;
        self.ends.push([a as u32, b as u32]);
        self.incident[a].push(id);
        self.incident[b].push(id);
        id
    }

    pub fn vertex_count(&self) -> usize {
        self.incident.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: u32) -> (usize, usize) {
        let [a, b] = self.ends[e as usize];
        (a as usize, b as usize)
    }

    pub fn incident(&self, v: usize) -> &[u32] {
        &self.incident[v]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<u32> {
        self.incident[a].iter().copied().find(|&e| {
            let (x, y) = self.ends(e);
            (x == a && y == b) || (x == b && y == a)
        })
    }
}

/// One direction out of a pearl: the edge leaving the pearl and the edge that
/// continues straight on from the neighbouring vertex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Arm {
    pub first: Option<u32>,
    pub second: Option<u32>,
}

/// Genre-specific constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Exactly `target` of `edges` are on the loop.
    EdgeSum { edges: Vec<u32>, target: u8 },
    /// At least one of the two vertices is on the loop.
    NotBothUnvisited { a: u32, b: u32 },
    /// Exactly `target` of `vertices` are off the loop.
    UnvisitedCount { vertices: Vec<u32>, target: u32 },
    /// Turn here, go straight on both neighbours. Arms indexed N, E, S, W.
    BlackPearl { vertex: u32, arms: [Arm; 4] },
    /// Go straight here, turn on at least one neighbour. Arms indexed N, E, S, W.
    WhitePearl { vertex: u32, arms: [Arm; 4] },
}

/// A complete search instance.
#[derive(Debug, Clone, Default)]
pub struct LoopProblem {
    pub graph: LoopGraph,
    pub rules: Vec<Rule>,
    /// Vertices that must lie on the loop.
    pub required: Vec<u32>,
    /// Vertices that must stay off the loop.
    pub excluded: Vec<u32>,
    /// Edges whose state is fixed up front (`true` = on the loop).
    pub fixed: Vec<(u32, bool)>,
    pub branching: Branching,
}

/// Choice of the next edge to branch on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Branching {
    /// Least undecided edge, on the loop first: the first solution found is
    /// the least in edge order.
    #[default]
    Canonical,
    /// Extend the path end with the fewest undecided edges. Still exhaustive,
    /// but the solution found is not canonical.
    PathEnds,
}

impl LoopProblem {
    pub fn new(graph: LoopGraph) -> Self {
        LoopProblem { graph, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_nodes: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn millis(ms: u64) -> Self {
        Budget { deadline: Some(Instant::now() + std::time::Duration::from_millis(ms)), max_nodes: None }
    }

    pub fn until(deadline: Option<Instant>) -> Self {
        Budget { deadline, max_nodes: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Per-edge membership of the canonical solution.
    Found(Vec<bool>),
    Exhausted,
    Timeout,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeState {
    Unknown,
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Visit {
    Unknown,
    Yes,
    No,
}

#[derive(Debug, Clone, Copy)]
enum Undo {
    Edge(u32, EdgeState),
    Visit(u32, Visit),
    Partner(u32, u32),
    SegLen(u32, u32),
    Closed,
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Vertex(u32),
    Rule(u32),
    CloseAll,
}

struct Conflict;

type Step = Result<(), Conflict>;

struct Engine<'p> {
    p: &'p LoopProblem,
    edge_watch: Vec<Vec<u32>>,
    vertex_watch: Vec<Vec<u32>>,
    edge: Vec<EdgeState>,
    visit: Vec<Visit>,
    deg_in: Vec<u8>,
    deg_unk: Vec<u8>,
    partner: Vec<u32>,
    seg_len: Vec<u32>,
    total_in: u32,
    num_yes: u32,
    closed: bool,
    trail: Vec<Undo>,
    queue: Vec<Task>,
    vertex_dirty: Vec<bool>,
    rule_dirty: Vec<bool>,
}

impl<'p> Engine<'p> {
    fn new(p: &'p LoopProblem) -> Self {
        let g = &p.graph;
        let n = g.vertex_count();
        let mut edge_watch = vec![Vec::new(); g.edge_count()];
        let mut vertex_watch = vec![Vec::new(); n];
        for (i, rule) in p.rules.iter().enumerate() {
            let i = i as u32;
            match rule {
                Rule::EdgeSum { edges, .. } => edges.iter().for_each(|&e| edge_watch[e as usize].push(i)),
                Rule::NotBothUnvisited { a, b } => {
                    vertex_watch[*a as usize].push(i);
                    vertex_watch[*b as usize].push(i);
                }
                Rule::UnvisitedCount { vertices, .. } => {
                    vertices.iter().for_each(|&v| vertex_watch[v as usize].push(i))
                }
                Rule::BlackPearl { arms, .. } | Rule::WhitePearl { arms, .. } => {
                    for arm in arms {
                        for e in arm.first.iter().chain(arm.second.iter()) {
                            edge_watch[*e as usize].push(i);
                        }
                    }
                }
            }
        }
        Engine {
            p,
            edge_watch,
            vertex_watch,
            edge: vec![EdgeState::Unknown; g.edge_count()],
            visit: vec![Visit::Unknown; n],
            deg_in: vec![0; n],
            deg_unk: (0..n).map(|v| g.incident(v).len() as u8).collect(),
            partner: (0..n as u32).collect(),
            seg_len: vec![0; n],
            total_in: 0,
            num_yes: 0,
            closed: false,
            trail: Vec::new(),
            queue: Vec::new(),
            vertex_dirty: vec![false; n],
            rule_dirty: vec![false; p.rules.len()],
        }
    }

    fn push_vertex(&mut self, v: usize) {
        if !self.vertex_dirty[v] {
            self.vertex_dirty[v] = true;
            self.queue.push(Task::Vertex(v as u32));
        }
    }

    fn push_rule(&mut self, r: u32) {
        if !self.rule_dirty[r as usize] {
            self.rule_dirty[r as usize] = true;
            self.queue.push(Task::Rule(r));
        }
    }

    fn clear_queue(&mut self) {
        for t in self.queue.drain(..) {
            match t {
                Task::Vertex(v) => self.vertex_dirty[v as usize] = false,
                Task::Rule(r) => self.rule_dirty[r as usize] = false,
                Task::CloseAll => {}
            }
        }
    }

    fn state(&self, e: Option<u32>) -> EdgeState {
        e.map_or(EdgeState::Out, |e| self.edge[e as usize])
    }

    fn set_visit(&mut self, v: usize, to: Visit) -> Step {
        let cur = self.visit[v];
        if cur == to {
            return Ok(());
        }
        if cur != Visit::Unknown {
            return Err(Conflict);
        }
        if to == Visit::No && self.deg_in[v] > 0 {
            return Err(Conflict);
        }
        self.trail.push(Undo::Visit(v as u32, cur));
        self.visit[v] = to;
        if to == Visit::Yes {
            self.num_yes += 1;
        }
        self.push_vertex(v);
        for i in 0..self.vertex_watch[v].len() {
            let r = self.vertex_watch[v][i];
            self.push_rule(r);
        }
        Ok(())
    }

    fn set_edge(&mut self, e: u32, to: EdgeState) -> Step {
        let cur = self.edge[e as usize];
        if cur == to {
            return Ok(());
        }
        if cur != EdgeState::Unknown {
            return Err(Conflict);
        }
        let (u, v) = self.p.graph.ends(e);
        if to == EdgeState::In {
            if self.closed
                || self.deg_in[u] >= 2
                || self.deg_in[v] >= 2
                || self.visit[u] == Visit::No
                || self.visit[v] == Visit::No
            {
                return Err(Conflict);
            }
            if self.deg_in[u] == 1 && self.deg_in[v] == 1 && self.partner[u] as usize == v {
                let len = self.seg_len[u];
                if self.total_in != len {
                    return Err(Conflict);
                }
                // the segment's own vertices are already marked visited
                if self.num_yes != len + 1 {
                    return Err(Conflict);
                }
                self.trail.push(Undo::Closed);
                self.closed = true;
                self.queue.push(Task::CloseAll);
            } else {
                let a = if self.deg_in[u] == 0 { u } else { self.partner[u] as usize };
                let b = if self.deg_in[v] == 0 { v } else { self.partner[v] as usize };
                let len = self.seg_len[a] + self.seg_len[b] + 1;
                for x in [a, b] {
                    self.trail.push(Undo::Partner(x as u32, self.partner[x]));
                    self.trail.push(Undo::SegLen(x as u32, self.seg_len[x]));
                    self.seg_len[x] = len;
                }
                self.partner[a] = b as u32;
                self.partner[b] = a as u32;
                self.push_vertex(a);
                self.push_vertex(b);
            }
            self.trail.push(Undo::Edge(e, cur));
            self.edge[e as usize] = EdgeState::In;
            self.deg_in[u] += 1;
            self.deg_in[v] += 1;
            self.deg_unk[u] -= 1;
            self.deg_unk[v] -= 1;
            self.total_in += 1;
            self.set_visit(u, Visit::Yes)?;
            self.set_visit(v, Visit::Yes)?;
        } else {
            self.trail.push(Undo::Edge(e, cur));
            self.edge[e as usize] = EdgeState::Out;
            self.deg_unk[u] -= 1;
            self.deg_unk[v] -= 1;
        }
        self.push_vertex(u);
        self.push_vertex(v);
        for i in 0..self.edge_watch[e as usize].len() {
            let r = self.edge_watch[e as usize][i];
            self.push_rule(r);
        }
        Ok(())
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("non-empty") {
                Undo::Edge(e, old) => {
                    let (u, v) = self.p.graph.ends(e);
                    if self.edge[e as usize] == EdgeState::In {
                        self.deg_in[u] -= 1;
                        self.deg_in[v] -= 1;
                        self.total_in -= 1;
                    }
                    self.deg_unk[u] += 1;
                    self.deg_unk[v] += 1;
                    self.edge[e as usize] = old;
                }
                Undo::Visit(v, old) => {
                    if self.visit[v as usize] == Visit::Yes {
                        self.num_yes -= 1;
                    }
                    self.visit[v as usize] = old;
                }
                Undo::Partner(v, old) => self.partner[v as usize] = old,
                Undo::SegLen(v, old) => self.seg_len[v as usize] = old,
                Undo::Closed => self.closed = false,
            }
        }
    }

    fn unknown_incident(&self, v: usize) -> impl Iterator<Item = u32> + '_ {
        self.p.graph.incident(v).iter().copied().filter(move |&e| self.edge[e as usize] == EdgeState::Unknown)
    }

    fn vertex_task(&mut self, v: usize) -> Step {
        let din = self.deg_in[v];
        let dunk = self.deg_unk[v];
        if din > 2 {
            return Err(Conflict);
        }
        if self.visit[v] == Visit::No || din == 2 {
            if dunk > 0 {
                let es: Vec<u32> = self.unknown_incident(v).collect();
                for e in es {
                    self.set_edge(e, EdgeState::Out)?;
                }
            }
            return Ok(());
        }
        if din == 1 {
            match dunk {
                0 => return Err(Conflict),
                1 => {
                    let e = self.unknown_incident(v).next().expect("one unknown");
                    return self.set_edge(e, EdgeState::In);
                }
                _ => {
                    // an edge straight back to the segment's other end may only
                    // close the final loop
                    let p = self.partner[v] as usize;
                    let len = self.seg_len[v];
                    if self.total_in != len || self.num_yes != len + 1 {
                        if let Some(e) = self.p.graph.edge_between(v, p) {
                            if self.edge[e as usize] == EdgeState::Unknown {
                                self.set_edge(e, EdgeState::Out)?;
                            }
                        }
                    }
                }
            }
            return Ok(());
        }
        // din == 0
        match self.visit[v] {
            Visit::Yes => {
                if dunk < 2 {
                    return Err(Conflict);
                }
                if dunk == 2 {
                    let es: Vec<u32> = self.unknown_incident(v).collect();
                    for e in es {
                        self.set_edge(e, EdgeState::In)?;
                    }
                }
            }
            Visit::Unknown => {
                if dunk < 2 {
                    self.set_visit(v, Visit::No)?;
                }
            }
            Visit::No => {}
        }
        Ok(())
    }

    fn rule_task(&mut self, r: usize) -> Step {
        let p = self.p;
        match &p.rules[r] {
            Rule::EdgeSum { edges, target } => {
                let target = *target as usize;
                let on = edges.iter().filter(|&&e| self.edge[e as usize] == EdgeState::In).count();
                let unk = edges.iter().filter(|&&e| self.edge[e as usize] == EdgeState::Unknown).count();
                if on > target || on + unk < target {
                    return Err(Conflict);
                }
                if unk > 0 && (on == target || on + unk == target) {
                    let to = if on == target { EdgeState::Out } else { EdgeState::In };
                    for &e in edges {
                        if self.edge[e as usize] == EdgeState::Unknown {
                            self.set_edge(e, to)?;
                        }
                    }
                }
            }
            Rule::NotBothUnvisited { a, b } => {
                let (a, b) = (*a as usize, *b as usize);
                if self.visit[a] == Visit::No {
                    self.set_visit(b, Visit::Yes)?;
                }
                if self.visit[b] == Visit::No {
                    self.set_visit(a, Visit::Yes)?;
                }
            }
            Rule::UnvisitedCount { vertices, target } => {
                let target = *target as usize;
                let off = vertices.iter().filter(|&&v| self.visit[v as usize] == Visit::No).count();
                let unk = vertices.iter().filter(|&&v| self.visit[v as usize] == Visit::Unknown).count();
                if off > target || off + unk < target {
                    return Err(Conflict);
                }
                if unk > 0 && (off == target || off + unk == target) {
                    let to = if off == target { Visit::Yes } else { Visit::No };
                    for &v in vertices {
                        if self.visit[v as usize] == Visit::Unknown {
                            self.set_visit(v as usize, to)?;
                        }
                    }
                }
            }
            Rule::BlackPearl { arms, .. } => {
                for d in 0..4 {
                    let arm = arms[d];
                    let Some(first) = arm.first else { continue };
                    let second = self.state(arm.second);
                    if self.edge[first as usize] == EdgeState::In {
                        if let Some(opp) = arms[(d + 2) % 4].first {
                            self.set_edge(opp, EdgeState::Out)?;
                        }
                        match arm.second {
                            Some(s) => self.set_edge(s, EdgeState::In)?,
                            None => return Err(Conflict),
                        }
                    } else if second == EdgeState::Out {
                        self.set_edge(first, EdgeState::Out)?;
                    }
                }
            }
            Rule::WhitePearl { arms, .. } => {
                for (a, b) in [(0usize, 2usize), (1, 3)] {
                    let sa = self.state(arms[a].first);
                    let sb = self.state(arms[b].first);
                    let through_blocked = sa == EdgeState::Out
                        || sb == EdgeState::Out
                        || (self.state(arms[a].second) == EdgeState::In && self.state(arms[b].second) == EdgeState::In);
                    if through_blocked {
                        for e in [arms[a].first, arms[b].first].into_iter().flatten() {
                            self.set_edge(e, EdgeState::Out)?;
                        }
                        continue;
                    }
                    if sa == EdgeState::In || sb == EdgeState::In {
                        for e in [arms[a].first, arms[b].first].into_iter().flatten() {
                            self.set_edge(e, EdgeState::In)?;
                        }
                        // at least one neighbour must turn
                        let ta = self.state(arms[a].second);
                        let tb = self.state(arms[b].second);
                        if ta == EdgeState::In {
                            if let Some(e) = arms[b].second {
                                self.set_edge(e, EdgeState::Out)?;
                            }
                        }
                        if tb == EdgeState::In {
                            if let Some(e) = arms[a].second {
                                self.set_edge(e, EdgeState::Out)?;
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn close_all(&mut self) -> Step {
        for e in 0..self.edge.len() {
            if self.edge[e] == EdgeState::Unknown {
                self.set_edge(e as u32, EdgeState::Out)?;
            }
        }
        Ok(())
    }

    fn propagate_local(&mut self) -> Step {
        while let Some(task) = self.queue.pop() {
            let step = match task {
                Task::Vertex(v) => {
                    self.vertex_dirty[v as usize] = false;
                    self.vertex_task(v as usize)
                }
                Task::Rule(r) => {
                    self.rule_dirty[r as usize] = false;
                    self.rule_task(r as usize)
                }
                Task::CloseAll => self.close_all(),
            };
            if step.is_err() {
                self.clear_queue();
                return step;
            }
        }
        Ok(())
    }

    /// Bridge and component reasoning over the edges that are still usable.
    /// Returns whether anything changed.
    fn global_pass(&mut self) -> Result<bool, Conflict> {
        let g = &self.p.graph;
        let n = g.vertex_count();
        let usable = |e: u32, s: &Self| s.edge[e as usize] != EdgeState::Out;
        // iterative Tarjan bridge search
        let mut disc = vec![u32::MAX; n];
        let mut low = vec![0u32; n];
        let mut timer = 0u32;
        let mut bridges: Vec<u32> = Vec::new();
        let mut stack: Vec<(u32, u32, usize)> = Vec::new(); // (vertex, parent edge, next incident idx)
        for root in 0..n {
            if disc[root] != u32::MAX || self.visit[root] == Visit::No {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root as u32, u32::MAX, 0));
            while let Some(top) = stack.last_mut() {
                let (v, pe, idx) = (top.0 as usize, top.1, top.2);
                let inc = g.incident(v);
                if idx < inc.len() {
                    top.2 += 1;
                    let e = inc[idx];
                    if e == pe || !usable(e, self) {
                        continue;
                    }
                    let (a, b) = g.ends(e);
                    let w = if a == v { b } else { a };
                    if disc[w] == u32::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w as u32, e, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(parent) = stack.last() {
                        let p = parent.0 as usize;
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            bridges.push(pe);
                        }
                    }
                }
            }
        }
        let mut changed = false;
        for e in bridges {
            match self.edge[e as usize] {
                EdgeState::In => return Err(Conflict),
                EdgeState::Unknown => {
                    self.set_edge(e, EdgeState::Out)?;
                    changed = true;
                }
                EdgeState::Out => {}
            }
        }
        // components over usable edges; all visited vertices must share one
        let mut comp = vec![u32::MAX; n];
        let mut comps_with_yes = 0u32;
        let mut yes_comp = u32::MAX;
        let mut next = 0u32;
        let mut todo = Vec::new();
        for root in 0..n {
            if comp[root] != u32::MAX {
                continue;
            }
            comp[root] = next;
            todo.push(root);
            let mut has_yes = false;
            while let Some(v) = todo.pop() {
                has_yes |= self.visit[v] == Visit::Yes;
                for &e in g.incident(v) {
                    if self.edge[e as usize] == EdgeState::Out {
                        continue;
                    }
                    let (a, b) = g.ends(e);
                    let w = if a == v { b } else { a };
                    if comp[w] == u32::MAX {
                        comp[w] = next;
                        todo.push(w);
                    }
                }
            }
            if has_yes {
                comps_with_yes += 1;
                yes_comp = next;
            }
            next += 1;
        }
        if comps_with_yes > 1 {
            return Err(Conflict);
        }
        if comps_with_yes == 1 {
            for (v, &c) in comp.iter().enumerate() {
                if c != yes_comp && self.visit[v] == Visit::Unknown {
                    self.set_visit(v, Visit::No)?;
                    changed = true;
                }
            }
        }
        Ok(changed)
    }

    fn propagate(&mut self) -> Step {
        loop {
            self.propagate_local()?;
            match self.global_pass() {
                Ok(true) => continue,
                Ok(false) => return Ok(()),
                Err(c) => {
                    self.clear_queue();
                    return Err(c);
                }
            }
        }
    }

    fn seed(&mut self) -> Step {
        for v in 0..self.p.graph.vertex_count() {
            self.push_vertex(v);
        }
        for r in 0..self.p.rules.len() as u32 {
            self.push_rule(r);
        }
        let p = self.p;
        for &v in &p.required {
            self.set_visit(v as usize, Visit::Yes)?;
        }
        for &v in &p.excluded {
            self.set_visit(v as usize, Visit::No)?;
        }
        for &(e, on) in &p.fixed {
            self.set_edge(e, if on { EdgeState::In } else { EdgeState::Out })?;
        }
        Ok(())
    }

    fn first_unknown(&self) -> Option<u32> {
        self.edge.iter().position(|&s| s == EdgeState::Unknown).map(|i| i as u32)
    }

    fn next_branch(&self) -> Option<u32> {
        if self.p.branching == Branching::PathEnds {
            let end = (0..self.p.graph.vertex_count())
                .filter(|&v| self.deg_in[v] == 1 && self.deg_unk[v] > 0)
                .min_by_key(|&v| self.deg_unk[v]);
            if let Some(v) = end {
                return self.unknown_incident(v).next();
            }
        }
        self.first_unknown()
    }

    fn run(&mut self, budget: Budget, stats: &mut SearchStats) -> SearchOutcome {
        struct Frame {
            mark: usize,
            edge: u32,
            tried_out: bool,
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut ok = match self.seed() {
            Ok(()) => true,
            Err(_) => {
                self.clear_queue();
                false
            }
        };
        loop {
            if ok {
                stats.nodes += 1;
                if stats.nodes.is_multiple_of(64) {
                    if let Some(d) = budget.deadline {
                        if Instant::now() >= d {
                            return SearchOutcome::Timeout;
                        }
                    }
                }
                if let Some(max) = budget.max_nodes {
                    if stats.nodes > max {
                        return SearchOutcome::Timeout;
                    }
                }
                ok = self.propagate().is_ok();
            }
            if ok {
                match self.next_branch() {
                    None => {
                        if self.closed && self.total_in > 0 {
                            return SearchOutcome::Found(self.edge.iter().map(|&s| s == EdgeState::In).collect());
                        }
                        // complete but not a loop: fall through to backtracking
                    }
                    Some(e) => {
                        stack.push(Frame { mark: self.trail.len(), edge: e, tried_out: false });
                        if self.set_edge(e, EdgeState::In).is_err() {
                            self.clear_queue();
                            ok = false;
                        }
                        continue;
                    }
                }
            }
            // backtrack
            loop {
                let Some(frame) = stack.pop() else {
                    return SearchOutcome::Exhausted;
                };
                self.undo_to(frame.mark);
                self.clear_queue();
                if frame.tried_out {
                    continue;
                }
                stack.push(Frame { tried_out: true, ..frame });
                let e = stack.last().expect("pushed").edge;
                if self.set_edge(e, EdgeState::Out).is_ok() {
                    ok = true;
                    break;
                }
                self.clear_queue();
            }
        }
    }
}

/// Searches for the canonical solution of `problem`.
pub fn solve(problem: &LoopProblem, budget: Budget) -> SearchOutcome {
    solve_with_stats(problem, budget).0
}

pub fn solve_with_stats(problem: &LoopProblem, budget: Budget) -> (SearchOutcome, SearchStats) {
    let mut stats = SearchStats::default();
    let mut engine = Engine::new(problem);
    let out = engine.run(budget, &mut stats);
    (out, stats)
}
