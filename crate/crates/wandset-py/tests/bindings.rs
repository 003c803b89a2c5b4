use wandset_py::{build, load};

#[test]
fn builds_and_reloads_without_an_interpreter() {
    let u = build("church:2", 3, None).unwrap();
    assert_eq!(u.stage_counts(), [0, 1, 3, 11]);
    let text = u.export();
    assert_eq!(load(&text).unwrap().export(), text);
    assert_eq!(u.resolve("*0({})").unwrap(), 2);
    assert_eq!(u.fragment().len(), 11);
}

#[test]
fn caps_and_bad_input_are_errors() {
    assert!(build("pure", 4, Some(5)).is_err());
    assert!(build("nope", 1, None).is_err());
    assert!(load("{").is_err());
}
