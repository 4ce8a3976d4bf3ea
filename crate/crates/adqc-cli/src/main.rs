// Copyright 2026 the adqc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let execution = adqc_cli::execute(&args);
    print!("{}", execution.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", execution.stderr);
    std::process::exit(execution.code);
}
