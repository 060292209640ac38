use wallcross_demo::{series_json, summands_json, window_grid, window_grid_json};

#[test]
fn slice_window_is_a_segment() {
    // W_slice(2, 0) is the segment from (-3/2, 3/2) to (3/2, -3/2).
    let g = window_grid("WSlice", 0, 0, 0, 2, 2).unwrap();
    assert_eq!(g.cells.len(), 9);
    assert_eq!(g.inside, 7);
    assert_eq!(g.cells[4], "....#....");
    assert_eq!(g.xs.first().map(String::as_str), Some("-2"));
    assert_eq!(g.ys.first().map(String::as_str), Some("2"));
}

#[test]
fn full_window_is_a_band() {
    // W(2) contains every point with |x - y| <= 3.
    let g = window_grid("W", 0, 0, 0, 2, 1).unwrap();
    assert_eq!(g.cells, [".####", "#####", "#####", "#####", "####."]);
}

#[test]
fn rejects_bad_input() {
    assert!(window_grid_json("Q", 0, 0, 0, 1, 1).is_err());
    assert!(window_grid_json("W", 0, 0, 0, 100, 100).is_err());
    assert!(summands_json(2, 1, 0, "1/2", "open").is_err());
    assert!(summands_json(2, 1, 0, "-1+eps", "sideways").is_err());
}

#[test]
fn summands_and_series() {
    let s: serde_json::Value = serde_json::from_str(&summands_json(2, 1, 0, "-1+eps", "open").unwrap()).unwrap();
    assert_eq!(s.as_array().unwrap().len(), 4);
    let t: serde_json::Value = serde_json::from_str(&series_json(1, 5).unwrap()).unwrap();
    assert_eq!(t["equal"], true);
    assert_eq!(t["dt"]["coeffs"][5], "24");
}
