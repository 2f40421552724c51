//! Regenerates the embedded second-order reference table:
//! `cargo run -p monopole-star --example dump_reference > crates/core/data/second_order_reference.json`

use monopole_star::reference::second_order_reference;

fn main() {
    let table = second_order_reference();
    println!("{}", serde_json::to_string_pretty(&table).unwrap());
}
