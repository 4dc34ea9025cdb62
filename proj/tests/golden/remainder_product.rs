const OOPS: u32 = 0x0;
const SUCCESS: u32 = 0xC0FFEE;

// circuit c1 as Rust function
fn c1(a: u32, b: u32, c: u32) -> u32 {
  ({ let lhs: u32 = a; lhs.checked_rem(b.wrapping_add(c)).unwrap_or(lhs) })
}

// circuit c2 as Rust function
fn c2(a: u32, b: u32, c: u32) -> u32 {
  ({ let lhs: u32 = a; lhs.checked_rem(c.wrapping_add(0u32).wrapping_add(b)).unwrap_or(lhs) })
}

// VM entry point
#[zkvm::entry(main)]
fn main(a: u32, b: u32, c: u32) -> u32 {
  // inputs are bound by the VM adapter
  let c1_out = c1(a, b, c);
  let c2_out = c2(a, b, c);

  // check if violation occurred
  if c1_out != c2_out {
    OOPS // unexpected result
  } else {
    SUCCESS // expected result
  }
}
