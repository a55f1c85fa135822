#![no_main]

include!("../src/exercise.rs");

libfuzzer_sys::fuzz_target!(|data: &[u8]| {
    exercise_rat(data);
});
