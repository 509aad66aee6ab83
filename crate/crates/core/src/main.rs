// SPDX-License-Identifier: Apache-2.0
fn main() {
    let code = selmer3::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
