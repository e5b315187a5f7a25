use photorc::format::{decode_symbols, decode_trace, encode_symbols, encode_trace, HEADER_LEN};
use photorc_core::link::SymbolStream;
use proptest::prelude::*;

#[test]
fn truncated_trace_names_byte_offset() {
    let bytes = encode_trace(1e-12, &[1.0, 2.0, 3.0]);
    let e = decode_trace(&bytes[..bytes.len() - 3]).unwrap_err();
    assert_eq!(e.offset, (HEADER_LEN + 16) as u64);
    assert!(e.to_string().starts_with("byte offset 36:"), "{e}");
    let e = decode_trace(&bytes[..10]).unwrap_err();
    assert_eq!(e.offset, 10);
}

#[test]
fn bad_magic_and_trailing_bytes() {
    let mut bytes = encode_trace(1e-12, &[1.0]);
    bytes[0] = b'X';
    assert_eq!(decode_trace(&bytes).unwrap_err().offset, 0);
    let mut bytes = encode_trace(1e-12, &[1.0]);
    bytes.push(0);
    assert_eq!(decode_trace(&bytes).unwrap_err().offset, (HEADER_LEN + 8) as u64);
}

#[test]
fn symbol_file_rejects_foreign_bytes() {
    let e = decode_symbols(b"0123x2").unwrap_err();
    assert_eq!(e.offset, 4);
    assert_eq!(decode_symbols(b"0312\n").unwrap().as_slice(), &[0, 3, 1, 2]);
}

proptest! {
    #[test]
    fn trace_round_trip(dt in 1e-15f64..1e-9, values in prop::collection::vec(any::<f64>(), 0..200)) {
        let bytes = encode_trace(dt, &values);
        let t = decode_trace(&bytes).unwrap();
        prop_assert_eq!(encode_trace(t.dt, &t.values), bytes);
    }

    #[test]
    fn symbol_round_trip(symbols in prop::collection::vec(0u8..4, 0..300)) {
        let bytes = encode_symbols(&SymbolStream::new(symbols).unwrap());
        prop_assert_eq!(encode_symbols(&decode_symbols(&bytes).unwrap()), bytes);
    }
}
