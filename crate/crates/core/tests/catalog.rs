//! Shape of the shipped gadget tiles, checked from their clue templates.

use std::collections::BTreeSet;

use loopforge::catalog::{certify_gadget, load_gadget, parse_descriptor, Certified, TileLayout};
use loopforge::genre::{Genre, GenrePuzzle};
use loopforge::grid::{CellCoord, GridDims, Side};
use loopforge::outcome::TimeLimit;
use loopforge::transform::Transform;

fn walls(genre: Genre) -> BTreeSet<CellCoord> {
    load_gadget(genre).unwrap().wall_cells().unwrap()
}

/// Positions along `side` of a placed 5×5 tile whose border cell is open.
fn openings(walls: &BTreeSet<CellCoord>, t: Transform, side: Side) -> BTreeSet<usize> {
    let placed: BTreeSet<CellCoord> = walls.iter().map(|&c| t.apply_cell(c, 5, 5)).collect();
    (0..5)
        .filter(|&i| {
            let cell = match side {
                Side::N => CellCoord::new(i, 0),
                Side::S => CellCoord::new(i, 4),
                Side::W => CellCoord::new(0, i),
                Side::E => CellCoord::new(4, i),
            };
            !placed.contains(&cell)
        })
        .collect()
}

#[test]
fn yajilin_walls_leave_one_cell_between_facing_exits() {
    let d = load_gadget(Genre::Yajilin).unwrap();
    assert_eq!(d.size(), 5);
    assert_eq!(d.transforms(), Transform::ROTATIONS);
    let grey = walls(Genre::Yajilin);
    for &a in &Transform::ROTATIONS {
        for &b in &Transform::ROTATIONS {
            for side in [Side::E, Side::S] {
                let gap: Vec<usize> =
                    openings(&grey, a, side).intersection(&openings(&grey, b, side.opposite())).copied().collect();
                let facing = d.placed_exits(a).contains(&side) && d.placed_exits(b).contains(&side.opposite());
                let expected: &[usize] = if facing { &[2] } else { &[] };
                assert_eq!(gap, expected, "{} then {} across {side}", a.name(), b.name());
            }
        }
    }
}

#[test]
fn simple_loop_shading_is_the_yajilin_grey_mask() {
    assert_eq!(walls(Genre::SimpleLoop), walls(Genre::Yajilin));
    assert_eq!(load_gadget(Genre::SimpleLoop).unwrap().transforms(), Transform::ROTATIONS);
}

#[test]
fn slitherlink_tile_is_walled_by_threes() {
    let d = load_gadget(Genre::Slitherlink).unwrap();
    assert_eq!(d.size(), 10);
    assert_eq!(d.transforms().len(), 8);
    let GenrePuzzle::Slitherlink { clues, .. } = d.template() else { panic!("not a slitherlink template") };
    let border = |side: Side| -> Vec<Option<u8>> {
        (0..10)
            .map(|i| {
                let c = match side {
                    Side::N => CellCoord::new(i, 0),
                    Side::S => CellCoord::new(i, 9),
                    Side::W => CellCoord::new(0, i),
                    Side::E => CellCoord::new(9, i),
                };
                clues.get(&c).copied()
            })
            .collect()
    };
    assert_eq!(d.closed_side(), Side::N);
    let top = border(Side::N);
    assert_eq!(top.iter().filter(|v| **v == Some(1)).count(), 2);
    assert_eq!(&top[4..6], [Some(1), Some(1)]);
    for side in Side::ALL {
        let line = border(side);
        // every run of 3s along a border is a chain of at least two
        let runs: Vec<usize> = line.split(|v| *v != Some(3)).map(|run| run.len()).filter(|&n| n > 0).collect();
        assert!(!runs.is_empty() && runs.iter().all(|&n| n >= 2), "{side}: {runs:?}");
    }
    assert!(clues.values().all(|&v| v == 1 || v == 3));
}

#[test]
fn masyu_tile_loads_with_every_transform() {
    let d = load_gadget(Genre::Masyu).unwrap();
    assert_eq!(d.size(), 9);
    assert_eq!(d.transforms().len(), 8);
    assert_eq!(d.exit_sides(), [Side::E, Side::S, Side::W]);
}

#[test]
fn zero_up_option_clues_every_grey_cell() {
    let text = include_str!("../catalog/yajilin.txt").replace("zero-up-clues off", "zero-up-clues on");
    let d = parse_descriptor(&text).unwrap();
    assert!(d.zero_up_clues());
    let layout = TileLayout { dims: GridDims::new(2, 2).unwrap(), transforms: vec![Transform::IDENTITY; 4] };
    let GenrePuzzle::Yajilin { grey, .. } = d.build_board(&layout) else { panic!("not yajilin") };
    assert_eq!(grey.len(), 4 * walls(Genre::Yajilin).len());
    assert!(grey.values().all(|c| c.is_some_and(|a| a.count == 0 && a.direction == Side::N)));
    assert_ne!(certify_gadget(&d, TimeLimit::millis(60_000)).certified, Certified::No);
}
