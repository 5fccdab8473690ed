//! Machine checks of the T-metacell conditions on small tiled boards.
//!
//! * (a) every tile must be visited: with all lines into a tile forced off
//!   the board has no solution.
//! * (b) placed copies tile a rectangular grid with their exits lined up.
//! * (c) the loop leaves a tile only through its three exits.
//! * (d) an exit facing a closed side or the grid edge cannot be used.
//! * (e) every exit pair has a sub-solution that extends to the whole board.
//! * (f) the allowed transforms point the exits in any three directions.
//!
//! Two boards are used: a 2×2 ring of tiles, and a 3×2 ring whose middle
//! tiles are crossed straight through.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{Certified, CertifyMode, GadgetDescriptor, TileLayout};
use crate::cubic::exit_pair;
use crate::genre::{solve_genre_with, verify_genre, Genre, GenrePuzzle, SolveOptions};
use crate::grid::{CellCoord, CellLoop, EdgeId, GridDims, Side};
use crate::outcome::{Outcome, TimeLimit};
use crate::transform::Transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Decided by exhaustive search or static analysis.
    Pass,
    /// Every solution found respects the condition; not exhaustive.
    Witnessed,
    Fail,
    /// Search did not finish within the budget, or was not attempted.
    BudgetLimited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub detail: String,
    /// Solver calls or static cases examined.
    pub checks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetCertificate {
    pub genre: Genre,
    pub mode: &'static str,
    /// Condition letter to report.
    pub conditions: BTreeMap<char, ConditionReport>,
    pub certified: Certified,
    pub solver_calls: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// A board of tiles with the loop of tiles it is meant to carry.
struct TestBoard {
    name: &'static str,
    tiles: GridDims,
    /// World exit pair each tile is crossed by.
    route: BTreeMap<CellCoord, (Side, Side)>,
}

impl TestBoard {
    fn ring(name: &'static str, width: usize) -> TestBoard {
        let tiles = GridDims::new(width, 2).expect("board");
        let mut cycle: Vec<CellCoord> = (0..width).map(|c| CellCoord::new(c, 0)).collect();
        cycle.extend((0..width).rev().map(|c| CellCoord::new(c, 1)));
        let n = cycle.len();
        let route = (0..n)
            .map(|i| {
                let here = cycle[i];
                let prev = here.direction_to(cycle[(i + n - 1) % n]).expect("adjacent");
                let next = here.direction_to(cycle[(i + 1) % n]).expect("adjacent");
                (here, exit_pair(prev, next))
            })
            .collect();
        TestBoard { name, tiles, route }
    }

    fn standard() -> [TestBoard; 2] {
        [TestBoard::ring("2x2 ring", 2), TestBoard::ring("3x2 ring", 3)]
    }
}

struct Certifier<'a> {
    desc: &'a GadgetDescriptor,
    deadline: Option<Instant>,
    calls: usize,
}

impl Certifier<'_> {
    fn limit(&self) -> Option<TimeLimit> {
        match self.deadline {
            None => Some(TimeLimit::UNLIMITED),
            Some(d) => {
                let left = d.saturating_duration_since(Instant::now());
                (left > Duration::ZERO).then_some(TimeLimit(Some(left)))
            }
        }
    }

    fn solve(&mut self, board: &GenrePuzzle, fixed: BTreeMap<EdgeId, bool>) -> Outcome<CellLoop> {
        let Some(limit) = self.limit() else {
            return Outcome::Timeout;
        };
        self.calls += 1;
        solve_genre_with(board, &SolveOptions { limit, fixed, any_solution: true })
    }

    /// Transforms for every tile of a board; `pin` forces one tile's choice.
    /// Unused exits are turned towards the grid edge when possible so that no
    /// two spare exits face each other.
    fn layout(&self, board: &TestBoard, pin: Option<(CellCoord, Transform)>) -> Option<TileLayout> {
        let mut transforms = Vec::new();
        for tile in board.tiles.cells() {
            if let Some((at, t)) = pin {
                if at == tile {
                    transforms.push(t);
                    continue;
                }
            }
            let (a, b) = board.route[&tile];
            let fits = |t: &Transform| {
                let exits = self.desc.placed_exits(*t);
                exits.contains(&a) && exits.contains(&b)
            };
            let spare_to_border = |t: &Transform| {
                self.desc.placed_exits(*t).into_iter().all(|s| s == a || s == b || board.tiles.step(tile, s).is_none())
            };
            let t = self
                .desc
                .transforms()
                .iter()
                .copied()
                .filter(fits)
                .find(spare_to_border)
                .or_else(|| self.desc.transforms().iter().copied().find(fits))?;
            transforms.push(t);
        }
        Some(TileLayout { dims: board.tiles, transforms })
    }

    /// Seam edges of a layout sorted by the condition they probe: crossings
    /// between facing exits, steps out of an exit into a closed side (d), and
    /// steps away from any exit (c).
    fn classify_seams(&self, layout: &TileLayout) -> (BTreeSet<EdgeId>, Vec<EdgeId>, Vec<EdgeId>) {
        let mut crossings = BTreeSet::new();
        let mut exit_points = BTreeSet::new();
        for tile in layout.dims.cells() {
            let t = layout.transform(tile);
            for s in Side::ALL {
                if let Some(p) = self.desc.placed_exit_point(tile, t, s) {
                    exit_points.insert(p);
                }
                if let Some(e) = self.desc.crossing(layout, tile, s) {
                    crossings.insert(e);
                }
            }
        }
        let mut closed_exit = Vec::new();
        let mut wall = Vec::new();
        for e in self.desc.seam_edges(layout.dims) {
            if crossings.contains(&e) {
                continue;
            }
            let (p, q) = e.endpoints().expect("internal");
            if exit_points.contains(&p) || exit_points.contains(&q) {
                closed_exit.push(e);
            } else {
                wall.push(e);
            }
        }
        (crossings, closed_exit, wall)
    }

    /// Static check (b): every pair of placements lines up on shared sides.
    fn alignment(&self) -> ConditionReport {
        let mut checks = 0;
        for &t1 in self.desc.transforms() {
            for &t2 in self.desc.transforms() {
                for side in [Side::E, Side::S] {
                    checks += 1;
                    let layout = TileLayout {
                        dims: if side == Side::E { dims(2, 1) } else { dims(1, 2) },
                        transforms: vec![t1, t2],
                    };
                    let a = self.desc.placed_exit_point(CellCoord::new(0, 0), t1, side);
                    let b = layout
                        .dims
                        .step(CellCoord::new(0, 0), side)
                        .and_then(|other| self.desc.placed_exit_point(other, t2, side.opposite()));
                    if let (Some(a), Some(b)) = (a, b) {
                        if EdgeId::between(a, b).is_none() {
                            return report(
                                Verdict::Fail,
                                format!("{} then {} across {side}: exits at {a} and {b} miss", t1.name(), t2.name()),
                                checks,
                            );
                        }
                    }
                }
            }
        }
        report(Verdict::Pass, "all placement pairs tile a rectangular grid with aligned exits", checks)
    }

    /// Static check (f): closed sides reachable by the allowed transforms.
    fn directions(&self) -> ConditionReport {
        let closed: BTreeSet<Side> =
            self.desc.transforms().iter().map(|t| t.apply_side(self.desc.closed_side())).collect();
        let missing: Vec<String> = Side::ALL.iter().filter(|s| !closed.contains(s)).map(|s| s.to_string()).collect();
        if missing.is_empty() {
            report(Verdict::Pass, "every 3 of the 4 directions is realised", 4)
        } else {
            report(Verdict::Fail, format!("no placement closes side {}", missing.join(",")), 4)
        }
    }

    /// Static wall analysis for genres with unenterable cells: two placed
    /// tiles side by side leak wherever both border cells are open and the
    /// position is not a pair of facing exits. Returns leaks for (c) and (d).
    fn wall_leaks(&self, walls: &BTreeSet<CellCoord>) -> (Vec<String>, Vec<String>, usize) {
        let n = self.desc.size();
        let (mut wall, mut closed_exit, mut checks) = (Vec::new(), Vec::new(), 0);
        for &t1 in self.desc.transforms() {
            for &t2 in self.desc.transforms() {
                let w1: BTreeSet<CellCoord> = walls.iter().map(|&c| t1.apply_cell(c, n, n)).collect();
                let w2: BTreeSet<CellCoord> = walls.iter().map(|&c| t2.apply_cell(c, n, n)).collect();
                for side in [Side::E, Side::S] {
                    checks += 1;
                    let e1 = self.desc.placed_exit_point(CellCoord::new(0, 0), t1, side);
                    let e2 = self.desc.placed_exit_point(CellCoord::new(0, 0), t2, side.opposite());
                    for k in 0..n {
                        let (a, b) = match side {
                            Side::E => (CellCoord::new(n - 1, k), CellCoord::new(0, k)),
                            _ => (CellCoord::new(k, n - 1), CellCoord::new(k, 0)),
                        };
                        if w1.contains(&a) || w2.contains(&b) {
                            continue;
                        }
                        let at_a = e1 == Some(a);
                        let at_b = e2 == Some(b);
                        if at_a && at_b {
                            continue;
                        }
                        let what = format!("{} then {} across {side} at position {k}", t1.name(), t2.name());
                        if at_a || at_b {
                            closed_exit.push(what);
                        } else {
                            wall.push(what);
                        }
                    }
                }
            }
        }
        (wall, closed_exit, checks)
    }

    /// (e): each exit pair's tile solution, pinned on some test board,
    /// extends to a verified board solution. Returns the report and the
    /// witness solutions with their layouts.
    fn sub_solutions(&mut self) -> (ConditionReport, Vec<(TileLayout, GenrePuzzle, CellLoop)>) {
        let sides = self.desc.exit_sides();
        let mut witnesses = Vec::new();
        let mut checks = 0;
        let mut notes = Vec::new();
        for (i, &a) in sides.iter().enumerate() {
            for &b in &sides[i + 1..] {
                let Some((board, tile, t)) = self.host_for(a, b) else {
                    return (report(Verdict::Fail, format!("no test board carries pair {a}-{b}"), checks), witnesses);
                };
                let layout = self.layout(&board, Some((tile, t))).expect("pinned layout");
                let puzzle = self.desc.build_board(&layout);
                let (wa, wb) = board.route[&tile];
                let path = self.desc.placed_path(tile, t, wa, wb).expect("pair in bank");
                let mut fixed: BTreeMap<EdgeId, bool> =
                    self.desc.tile_edges(tile).into_iter().map(|e| (e, path.contains(&e))).collect();
                let used: BTreeSet<EdgeId> =
                    [wa, wb].iter().filter_map(|&s| self.desc.crossing(&layout, tile, s)).collect();
                for e in self.desc.tile_seams(board.tiles, tile) {
                    fixed.insert(e, used.contains(&e));
                }
                if self.desc.certify_mode() == CertifyMode::Witness {
                    // the other tiles' forced lines steer the search; any
                    // solution found is still checked by the verifier
                    for other in board.tiles.cells().filter(|&o| o != tile) {
                        for e in self.desc.placed_forced(other, layout.transform(other)) {
                            fixed.insert(e, true);
                        }
                    }
                }
                checks += 1;
                match self.solve(&puzzle, fixed) {
                    Outcome::Solved(sol) => {
                        if let Err(v) = verify_genre(&puzzle, &sol) {
                            return (
                                report(Verdict::Fail, format!("pair {a}-{b}: solver output rejected: {v}"), checks),
                                witnesses,
                            );
                        }
                        notes.push(format!("{a}-{b} on the {} as {} at {tile}", board.name, t.name()));
                        witnesses.push((layout, puzzle, sol));
                    }
                    Outcome::Unsat => {
                        return (
                            report(
                                Verdict::Fail,
                                format!("pair {a}-{b}: sub-solution does not extend on the {}", board.name),
                                checks,
                            ),
                            witnesses,
                        )
                    }
                    Outcome::Timeout => {
                        return (
                            report(Verdict::BudgetLimited, format!("pair {a}-{b}: budget exhausted"), checks),
                            witnesses,
                        )
                    }
                }
            }
        }
        (report(Verdict::Pass, format!("extended: {}", notes.join("; ")), checks), witnesses)
    }

    /// First test board tile and allowed transform realising the tile-frame pair `(a, b)`.
    fn host_for(&self, a: Side, b: Side) -> Option<(TestBoard, CellCoord, Transform)> {
        for board in TestBoard::standard() {
            let tiles: Vec<CellCoord> = board.tiles.cells().collect();
            for tile in tiles {
                let (wa, wb) = board.route[&tile];
                for &t in self.desc.transforms() {
                    let inv = t.inverse();
                    if exit_pair(inv.apply_side(wa), inv.apply_side(wb)) != exit_pair(a, b) {
                        continue;
                    }
                    let spare = t.apply_side(
                        self.desc.exit_sides().into_iter().find(|&s| s != a && s != b).expect("three exits"),
                    );
                    if board.tiles.step(tile, spare).is_none() {
                        return Some((board, tile, t));
                    }
                }
            }
        }
        None
    }

    /// Checks that found solutions only cross seams between facing exits and
    /// contain every tile's forced lines.
    fn witness_crossings(&self, witnesses: &[(TileLayout, GenrePuzzle, CellLoop)]) -> Result<(), (char, String)> {
        for (layout, _, sol) in witnesses {
            let (_, closed_exit, wall) = self.classify_seams(layout);
            if let Some(e) = closed_exit.iter().find(|e| sol.contains(e)) {
                return Err(('d', format!("a solution steps through a closed exit at {e}")));
            }
            if let Some(e) = wall.iter().find(|e| sol.contains(e)) {
                return Err(('c', format!("a solution crosses a tile wall at {e}")));
            }
        }
        Ok(())
    }

    fn forced_present(&self, witnesses: &[(TileLayout, GenrePuzzle, CellLoop)]) -> Result<(), String> {
        for (layout, _, sol) in witnesses {
            for tile in layout.dims.cells() {
                if let Some(e) = self.desc.placed_forced(tile, layout.transform(tile)).iter().find(|e| !sol.contains(e))
                {
                    return Err(format!("forced step {e} of tile {tile} is missing from a solution"));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive (a): no solution avoids any tile of either test board.
    fn visiting(&mut self) -> ConditionReport {
        let mut checks = 0;
        for board in TestBoard::standard() {
            let layout = self.layout(&board, None).expect("layout");
            let puzzle = self.desc.build_board(&layout);
            for tile in board.tiles.cells() {
                let fixed = self.desc.tile_seams(board.tiles, tile).into_iter().map(|e| (e, false)).collect();
                checks += 1;
                match self.solve(&puzzle, fixed) {
                    Outcome::Unsat => {}
                    Outcome::Solved(_) => {
                        return report(Verdict::Fail, format!("{}: a solution avoids tile {tile}", board.name), checks)
                    }
                    Outcome::Timeout => {
                        return report(
                            Verdict::BudgetLimited,
                            format!("{}: budget exhausted at tile {tile}", board.name),
                            checks,
                        )
                    }
                }
            }
        }
        report(Verdict::Pass, "no solution of either test board skips a tile", checks)
    }

    /// Exhaustive (c) and (d): forcing any non-exit seam step admits no solution.
    fn seams(&mut self) -> (ConditionReport, ConditionReport) {
        let mut results = [(Verdict::Pass, String::new(), 0usize), (Verdict::Pass, String::new(), 0usize)];
        'boards: for board in TestBoard::standard() {
            let layout = self.layout(&board, None).expect("layout");
            let puzzle = self.desc.build_board(&layout);
            let (_, closed_exit, wall) = self.classify_seams(&layout);
            for (slot, edges) in [(0, wall), (1, closed_exit)] {
                for e in edges {
                    results[slot].2 += 1;
                    match self.solve(&puzzle, BTreeMap::from([(e, true)])) {
                        Outcome::Unsat => {}
                        Outcome::Solved(_) => {
                            results[slot].0 = Verdict::Fail;
                            results[slot].1 = format!("{}: a solution steps across {e}", board.name);
                            break 'boards;
                        }
                        Outcome::Timeout => {
                            results[slot].0 = Verdict::BudgetLimited;
                            results[slot].1 = format!("{}: budget exhausted at {e}", board.name);
                            break 'boards;
                        }
                    }
                }
            }
        }
        let [(vc, dc, nc), (vd, dd, nd)] = results;
        let detail = |d: String, what: &str| {
            if d.is_empty() {
                format!("no solution of either test board {what}")
            } else {
                d
            }
        };
        (
            report(vc, detail(dc, "crosses a tile wall"), nc),
            report(vd, detail(dd, "uses an exit facing a closed side"), nd),
        )
    }
}

fn report(verdict: Verdict, detail: impl Into<String>, checks: usize) -> ConditionReport {
    ConditionReport { verdict, detail: detail.into(), checks }
}

fn dims(w: usize, h: usize) -> GridDims {
    GridDims::new(w, h).expect("dims")
}

/// Combines reports on one condition: a failure or an unfinished search
/// wins, then a decided pass, and a bare witness check last.
fn combine(reports: Vec<ConditionReport>) -> ConditionReport {
    let checks = reports.iter().map(|r| r.checks).sum();
    let pick = |v: Verdict| reports.iter().filter(|r| r.verdict == v).cloned().collect::<Vec<_>>();
    for v in [Verdict::Fail, Verdict::BudgetLimited, Verdict::Pass, Verdict::Witnessed] {
        let found = pick(v);
        if !found.is_empty() {
            let detail = found.iter().map(|r| r.detail.as_str()).collect::<Vec<_>>().join("; ");
            return ConditionReport { verdict: v, detail, checks };
        }
    }
    report(Verdict::BudgetLimited, "nothing checked", checks)
}

/// Runs every check within `budget` (total wall-clock time).
pub fn certify_gadget(desc: &GadgetDescriptor, budget: TimeLimit) -> GadgetCertificate {
    let start = Instant::now();
    let mut cx = Certifier { desc, deadline: budget.0.map(|d| start + d), calls: 0 };
    let mut conditions = BTreeMap::new();
    conditions.insert('b', cx.alignment());
    conditions.insert('f', cx.directions());

    let (mut e, witnesses) = cx.sub_solutions();
    if e.verdict == Verdict::Pass {
        if let Err(why) = cx.forced_present(&witnesses) {
            e = report(Verdict::Fail, why, e.checks);
        }
    }
    conditions.insert('e', e);

    let witnessed = |what: &str| {
        report(Verdict::Witnessed, format!("the {} sub-solution witnesses {what}", witnesses.len()), witnesses.len())
    };
    let mut c = vec![witnessed("cross only between facing exits")];
    let mut d = vec![witnessed("avoid closed exits")];
    if let Err((which, why)) = cx.witness_crossings(&witnesses) {
        let r = report(Verdict::Fail, why, witnesses.len());
        if which == 'c' {
            c.push(r);
        } else {
            d.push(r);
        }
    }
    if let Some(walls) = desc.wall_cells() {
        let (wall, closed_exit, checks) = cx.wall_leaks(&walls);
        let leak = |found: Vec<String>, ok: &str| match found.first() {
            None => report(Verdict::Pass, ok, checks),
            Some(first) => report(Verdict::Fail, format!("wall gap: {first} ({} gaps in all)", found.len()), checks),
        };
        c.push(leak(wall, "tile walls are closed for every placement pair"));
        d.push(leak(closed_exit, "closed sides seal every facing exit"));
    }

    let a = match desc.certify_mode() {
        CertifyMode::Exhaustive => {
            let (sc, sd) = cx.seams();
            c.push(sc);
            d.push(sd);
            cx.visiting()
        }
        CertifyMode::Witness => report(
            Verdict::BudgetLimited,
            "not machine-exhausted at this board size; visiting rests on the forced clue walls",
            0,
        ),
    };
    let (c, d) = (combine(c), combine(d));
    conditions.insert('a', a);
    conditions.insert('c', c);
    conditions.insert('d', d);

    let certified = if conditions.values().any(|r| r.verdict == Verdict::Fail) {
        Certified::No
    } else if conditions.values().all(|r| r.verdict == Verdict::Pass) {
        Certified::Yes
    } else {
        Certified::Partial
    };
    GadgetCertificate {
        genre: desc.genre(),
        mode: match desc.certify_mode() {
            CertifyMode::Exhaustive => "exhaustive",
            CertifyMode::Witness => "witness",
        },
        conditions,
        certified,
        solver_calls: cx.calls,
        elapsed_ms: None,
    }
}
