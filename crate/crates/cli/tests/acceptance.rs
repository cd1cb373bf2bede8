//! Acceptance checks, one line of output each. Run with
//! `cargo test -p gloam --test acceptance`; an optional argument filters by name.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use gloam_core::analysis::{argmax_in, bin_width, blackman_harris, local_peaks, magnitude_spectrum, welch_power};
use gloam_core::dsp::{equal_power_pan, CONTROL_BLOCK};
use gloam_core::engine::Engine;
use gloam_core::params::{EngineKind, Param, ParamSet, REGISTRY};
use gloam_core::preset::{factory_names, factory_preset};
use gloam_core::shadows::{AdstrParams, AdstrState, AdstrTimes, Gate, Shadows};
use gloam_core::wavetable::{build_saw_table, max_harmonic, note_to_hz, SuperOsc, WavetableBank};
use gloam_core::wintermute::Wintermute;
use gloam_server::controller::Controller;
use gloam_server::driver::{CallbackPhase, DriverConfig, NullAudio, Pacing};
use gloam_server::host::AudioHost;
use midly::num::{u15, u28, u4, u7};
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct CountingAlloc;

static CALLBACK_ALLOCS: AtomicUsize = AtomicUsize::new(0);

thread_local! {
    static IN_CALLBACK: Cell<bool> = const { Cell::new(false) };
}

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        count_if_in_callback();
        unsafe { System.alloc(layout) }
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        count_if_in_callback();
        unsafe { System.dealloc(ptr, layout) }
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        count_if_in_callback();
        unsafe { System.realloc(ptr, layout, new_size) }
    }
}

fn count_if_in_callback() {
    if IN_CALLBACK.with(Cell::get) {
        CALLBACK_ALLOCS.fetch_add(1, Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

type Check = fn() -> Result<String, String>;

const SR: f64 = 48_000.0;

fn main() -> ExitCode {
    let checks: [(&str, Check); 10] = [
        ("alias suppression", alias_suppression),
        ("saw partial law", saw_partial_law),
        ("supersaw constants", supersaw_constants),
        ("pan law", pan_law),
        ("adstr semantics", adstr_semantics),
        ("wintermute comb spectrum", comb_spectrum),
        ("trigger statistics", trigger_statistics),
        ("determinism", determinism),
        ("performance", performance),
        ("real-time safety", realtime_safety),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in checks {
        if filter.as_ref().is_some_and(|f| !name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1} s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{secs:.1} s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance check(s) failed");
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn to_f64(x: &[f32]) -> Vec<f64> {
    x.iter().map(|&s| f64::from(s)).collect()
}

/// Every spectral peak within 60 dB of the fundamental sits on a harmonic the
/// note's table is allowed to contain.
fn alias_suppression() -> Result<String, String> {
    let mut params = ParamSet::default();
    params.set(Param::ShDetune, 0.0);
    params.set(Param::ShShape, 0.0);
    // Open filter and dry output: nothing downstream hides aliasing.
    params.set(Param::ShCutoff, 1.0);
    params.set(Param::ShFilterEnvAmount, 0.0);
    params.set(Param::ShDelaySend, 0.0);
    params.set(Param::ShReverbSend, 0.0);
    let n = 1 << 16;
    let window = blackman_harris(n);
    let bw = bin_width(n, SR);
    let mut summary = Vec::new();
    for note in [48u8, 72, 100] {
        let mut synth = Shadows::with_param_set(SR, 0, &params);
        synth.note_on(note, 1.0);
        let block = synth.render(2 * SR as usize);
        // Past the attack and decay, into the sustain.
        let x = to_f64(&block.left[block.frames() - n..]);
        let mag = magnitude_spectrum(&x, &window);
        let f0 = note_to_hz(f64::from(note));
        let k0 = (f0 / bw).round() as usize;
        let fundamental = mag[argmax_in(&mag, k0 - 2, k0 + 2)];
        let floor = fundamental * 1e-3;
        let limit = max_harmonic(note, SR);
        let peaks = local_peaks(&mag, floor);
        for &p in &peaks {
            let f = p as f64 * bw;
            let k = (f / f0).round();
            let off_bins = (p as f64 - k * f0 / bw).abs();
            ensure(k >= 1.0 && k as usize <= limit && off_bins <= 1.0, || {
                format!(
                    "note {note}: peak at {f:.1} Hz ({:.1} dB) is not a harmonic <= {limit} of {f0:.2} Hz",
                    20.0 * (mag[p] / fundamental).log10()
                )
            })?;
        }
        summary.push(format!("note {note}: {} peaks, all harmonics <= {limit}", peaks.len()));
    }
    Ok(summary.join("; "))
}

/// Direct DFT of the note-69 table: partial k has amplitude a1/k.
fn saw_partial_law() -> Result<String, String> {
    let table = build_saw_table(69, SR);
    let x = table.samples();
    let n = x.len() as f64;
    let amp = |k: usize| {
        let (mut re, mut im) = (0.0, 0.0);
        for (i, &s) in x.iter().enumerate() {
            let ph = 2.0 * PI * (k * i) as f64 / n;
            re += f64::from(s) * ph.cos();
            im -= f64::from(s) * ph.sin();
        }
        re.hypot(im) * 2.0 / n
    };
    let limit = max_harmonic(69, SR);
    ensure(limit == 54, || format!("note 69 at 48 kHz allows {limit} partials, expected 54"))?;
    let a1 = amp(1);
    let mut worst: f64 = 0.0;
    for k in 1..=limit {
        let err = (amp(k) / a1 - 1.0 / k as f64).abs();
        worst = worst.max(err);
        ensure(err < 1e-6, || format!("a_{k}/a_1 off by {err:e}"))?;
    }
    let above = (limit + 1..limit + 40).map(amp).fold(0.0f64, f64::max) / a1;
    ensure(above < 1e-6, || format!("energy above partial {limit}: {above:e}"))?;
    Ok(format!("k <= {limit}: max |a_k/a_1 - 1/k| = {worst:.1e}; above: {above:.1e}"))
}

/// Measures each unison voice's phase increment, and the mono case through the engine.
fn supersaw_constants() -> Result<String, String> {
    const EXPECTED: [f64; 8] = [1.0024, 1.019, 0.981, 0.9977, 1.0046, 0.9954, 1.0093, 0.9907];
    let bank = WavetableBank::shared(SR);
    let table = bank.table(69);
    let freq = 440.0;
    let steps = 10_000;
    let mut osc = SuperOsc::new();
    let mut travelled = [0.0f64; 8];
    let mut last = osc.phases();
    for _ in 0..steps {
        osc.tick(table, freq, 0.0, 1.0, 1.0, 1.0, SR);
        let now = osc.phases();
        for v in 0..8 {
            travelled[v] += (now[v] - last[v]).rem_euclid(1.0);
        }
        last = now;
    }
    let mut worst: f64 = 0.0;
    for v in 0..8 {
        let measured = travelled[v] / (steps as f64 * freq / SR);
        let err = (measured - EXPECTED[v]).abs();
        worst = worst.max(err);
        ensure(err < 1e-6, || format!("voice {v}: multiplier {measured} vs {}", EXPECTED[v]))?;
    }

    let mut params = ParamSet::default();
    params.set(Param::ShDetune, 0.0);
    params.set(Param::ShWidth, 0.0);
    let mut synth = Shadows::with_param_set(SR, 0, &params);
    synth.note_on(57, 1.0);
    let mut block = synth.render(24_000);
    synth.note_off(57);
    block.append(&synth.render(24_000));
    let diff = block
        .left
        .iter()
        .zip(&block.right)
        .map(|(l, r)| (l - r).abs())
        .fold(0.0f32, f32::max);
    ensure(block.peak() > 0.01, || "mono render is silent".into())?;
    ensure(diff < 1e-6, || format!("detune=0 width=0 channels differ by {diff:e}"))?;
    Ok(format!("max multiplier error {worst:.1e}; mono channel difference {diff:.1e}"))
}

fn pan_law() -> Result<String, String> {
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(-1.0f64..1.0, 0.0f64..=1.0), |(s, pos)| {
            let (l, r) = equal_power_pan(s, pos);
            let err = (l * l + r * r - s * s).abs();
            proptest::prop_assert!(err <= 1e-6 * s * s + f64::MIN_POSITIVE, "s={} pos={} err={}", s, pos, err);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("10000 random (s, pos): L^2 + R^2 = s^2 within 1e-6 relative".into())
}

/// Linear attack/decay/sustain/release written from first principles, with
/// the release starting from whatever level the gate closed at.
fn reference_adsr(t: &AdstrTimes, time: f64, gate_off_at: Option<f64>) -> f64 {
    let held = |time: f64| {
        if time < t.attack {
            time / t.attack
        } else if time < t.attack + t.decay {
            1.0 + (t.sustain - 1.0) * (time - t.attack) / t.decay
        } else {
            t.sustain
        }
    };
    match gate_off_at {
        Some(off) if time > off => {
            let from = held(off);
            (from * (1.0 - (time - off) / t.release)).max(0.0)
        }
        _ => held(time),
    }
}

fn adstr_semantics() -> Result<String, String> {
    let knobs = |t_time| AdstrParams {
        attack: 0.1,
        decay: 0.2,
        sustain: 0.55,
        t_time,
        release: 0.15,
    };

    // T = 0 against the reference, per sample, through a release.
    let times = knobs(0.0).times();
    let dt = 1.0 / SR;
    let off_sample = (2.0 * SR) as usize;
    let mut env = AdstrState::new();
    let mut worst: f64 = 0.0;
    for i in 1..=(3.0 * SR) as usize {
        let gate = if i <= off_sample { Gate::On } else { Gate::Off };
        let got = env.tick(&times, gate, dt);
        let want = reference_adsr(&times, i as f64 * dt, Some(off_sample as f64 * dt));
        let err = (got - want).abs();
        worst = worst.max(err);
        ensure(err < 1e-9, || format!("t=0: sample {i}: {got} vs reference {want}"))?;
    }

    // Control-rate ticks as the engine runs them.
    let block_dt = CONTROL_BLOCK as f64 / SR;
    let run = |t_time: f64| {
        let times = knobs(t_time).times();
        let mut env = AdstrState::new();
        let mut out = Vec::new();
        for b in 1..=(6.0 / block_dt) as usize {
            out.push((b as f64 * block_dt, env.tick(&times, Gate::On, block_dt)));
        }
        (times, out)
    };

    let (times, falling) = run(-0.3);
    let target = times.attack + times.decay + times.t_time.abs();
    let zero_at = falling
        .iter()
        .find(|(_, l)| *l == 0.0)
        .map(|&(t, _)| t)
        .ok_or("t<0 never reached 0")?;
    ensure((zero_at - target).abs() <= block_dt, || {
        format!("t<0 reached 0 at {zero_at:.5} s, expected {target:.5} s")
    })?;
    ensure(falling.iter().filter(|(t, _)| *t > zero_at).all(|(_, l)| *l == 0.0), || {
        "t<0 level rose again after reaching 0".into()
    })?;

    let (times, rising) = run(0.3);
    let target_up = times.attack + times.decay + times.t_time;
    let one_at = rising
        .iter()
        .find(|(t, l)| *l == 1.0 && *t > times.attack + times.decay)
        .map(|&(t, _)| t)
        .ok_or("t>0 never reached 1")?;
    ensure((one_at - target_up).abs() <= block_dt, || {
        format!("t>0 reached 1 at {one_at:.5} s, expected {target_up:.5} s")
    })?;
    ensure(rising.iter().filter(|(t, _)| *t > one_at).all(|(_, l)| *l == 1.0), || {
        "t>0 did not hold 1".into()
    })?;
    Ok(format!(
        "t=0 max deviation {worst:.1e}; t<0 hits 0 at {zero_at:.4} s (A+D+|T| = {target:.4}); t>0 hits 1 at {one_at:.4} s"
    ))
}

fn drone_spectrum(spread: f64, fundamental: f64) -> (Vec<f64>, f64) {
    let mut params = ParamSet::default();
    params.set(Param::WmFundamental, fundamental);
    params.set(Param::WmSpread, spread);
    params.set(Param::WmEnvPitch, 0.0);
    params.set(Param::WmDriftAmt, 0.0);
    params.set(Param::WmResonance, 200.0);
    // Only the first eight partials are measured; eight voices keep each
    // retriggering about once a second over the render.
    params.set(Param::WmVoices, 8.0);
    let mut drone = Wintermute::with_param_set(SR, 1, &params);
    let block = drone.render(10 * SR as usize);
    let mono: Vec<f64> = block
        .left
        .iter()
        .zip(&block.right)
        .map(|(&l, &r)| 0.5 * (f64::from(l) + f64::from(r)))
        .collect();
    let seg = 1 << 14;
    (welch_power(&mono, seg), bin_width(seg, SR))
}

fn comb_spectrum() -> Result<String, String> {
    // 220 Hz keeps neighbouring partials of the 1.21 stretch several bins apart.
    let f = 220.0;
    let peak_offsets = |spread: f64| {
        let (power, bw) = drone_spectrum(spread, f);
        (1..=8)
            .map(|k| {
                let centre = k as f64 * f / bw;
                let lo = (centre - 0.5 * f / bw).ceil() as usize;
                let hi = (centre + 0.5 * f / bw).floor() as usize;
                argmax_in(&power, lo, hi) as f64 - centre
            })
            .collect::<Vec<f64>>()
    };
    let harmonic = peak_offsets(1.0);
    for (k, off) in harmonic.iter().enumerate() {
        ensure(off.abs() <= 1.0, || format!("spread 1: peak near {}·f is {off:.2} bins off", k + 1))?;
    }
    let stretched = peak_offsets(1.21);
    for (k, off) in stretched.iter().enumerate().skip(1) {
        ensure(off.abs() > 1.0, || {
            format!("spread 1.21: peak near {}·f still within {off:.2} bins", k + 1)
        })?;
    }
    let fmt = |v: &[f64]| v.iter().map(|o| format!("{o:+.1}")).collect::<Vec<_>>().join(" ");
    Ok(format!(
        "fundamental {f} Hz; spread 1 offsets (bins) [{}]; spread 1.21 [{}]",
        fmt(&harmonic),
        fmt(&stretched)
    ))
}

fn trigger_statistics() -> Result<String, String> {
    let run = |dev: f64| {
        let mut params = ParamSet::default();
        params.set(Param::WmVoices, 96.0);
        params.set(Param::WmAvgRate, 8.0);
        params.set(Param::WmDev, dev);
        let mut drone = Wintermute::with_param_set(SR, 1, &params);
        drone.record_triggers();
        let mut l = vec![0.0f32; SR as usize];
        let mut r = l.clone();
        for _ in 0..60 {
            drone.process(&mut l, &mut r);
        }
        drone
    };
    let random = run(0.5);
    let count = random.trigger_count();
    let rel = (count as f64 - 480.0).abs() / 480.0;
    ensure(rel <= 0.1, || format!("{count} retriggers in 60 s, expected 480 +/- 10%"))?;

    let periodic = run(0.0);
    let log = periodic.trigger_log();
    let mut intervals = Vec::new();
    for voice in 1..=96 {
        // Trigger times are block starts; compare whole frames.
        let times: Vec<i64> = log
            .iter()
            .filter(|e| e.voice == voice)
            .map(|e| (e.time * SR).round() as i64)
            .collect();
        ensure(times.len() >= 2, || format!("voice {voice} triggered {} times", times.len()))?;
        intervals.extend(times.windows(2).map(|w| w[1] - w[0]));
    }
    let first = intervals[0];
    ensure(intervals.iter().all(|&i| i == first), || {
        let (lo, hi) = (intervals.iter().min().unwrap(), intervals.iter().max().unwrap());
        format!("dev=0 intervals range {lo}..{hi} frames")
    })?;
    Ok(format!(
        "dev 0.5: {count} retriggers ({:+.1}%); dev 0: {} intervals all exactly {first} frames ({} s)",
        100.0 * (count as f64 - 480.0) / 480.0,
        intervals.len(),
        first as f64 / SR
    ))
}

fn write_fixture_midi(path: &Path) {
    use midly::{Format, Header, MidiMessage, Smf, Timing, TrackEvent, TrackEventKind};
    let ev = |delta: u32, key: u8, vel: u8| TrackEvent {
        delta: u28::new(delta),
        kind: TrackEventKind::Midi {
            channel: u4::new(0),
            message: MidiMessage::NoteOn {
                key: u7::new(key),
                vel: u7::new(vel),
            },
        },
    };
    let mut smf = Smf::new(Header::new(Format::SingleTrack, Timing::Metrical(u15::new(480))));
    smf.tracks = vec![vec![
        ev(0, 45, 110),
        ev(0, 57, 90),
        ev(480, 64, 100),
        ev(480, 45, 0),
        ev(0, 57, 0),
        ev(0, 64, 0),
    ]];
    smf.save(path).unwrap();
}

fn determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let midi = dir.path().join("fixture.mid");
    write_fixture_midi(&midi);
    let mut checked = Vec::new();
    for name in factory_names() {
        let engine = factory_preset(name).map_err(|e| e.to_string())?.engine;
        let render = |tag: &str| -> Result<Vec<u8>, String> {
            let out = dir.path().join(format!("{name}-{tag}.wav"));
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_gloam"));
            cmd.args(["render", "--preset", name, "--duration", "3", "--seed", "42", "-o"]).arg(&out);
            if engine == EngineKind::Shadows {
                cmd.arg("--midi").arg(&midi);
            }
            let o = cmd.output().map_err(|e| e.to_string())?;
            ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
            std::fs::read(&out).map_err(|e| e.to_string())
        };
        let (a, b) = (render("a")?, render("b")?);
        ensure(a == b, || format!("{name}: two renders differ"))?;
        checked.push(format!("{name} ({} bytes)", a.len()));
    }
    Ok(format!("byte-identical: {}", checked.join(", ")))
}

fn performance() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("bubbles.wav");
    let started = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_gloam"))
        .args(["render", "--preset", "bubbles", "--duration", "10", "--sr", "48000", "-o"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    let wall = started.elapsed().as_secs_f64();
    ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
    ensure(wall < 10.0, || format!("10 s of bubbles took {wall:.2} s"))?;
    Ok(format!("10 s of 96-voice bubbles at 48 kHz in {wall:.2} s (real-time factor {:.1})", 10.0 / wall))
}

fn callback_hook(phase: CallbackPhase) {
    IN_CALLBACK.with(|f| f.set(phase == CallbackPhase::Enter));
}

fn random_message(rng: &mut ChaCha8Rng) -> String {
    let roll: f64 = rng.random();
    if roll < 0.80 {
        let d = &REGISTRY[rng.random_range(0..REGISTRY.len())];
        if rng.random_bool(0.3) {
            let n: f64 = rng.random_range(-0.2..1.2);
            format!(r#"{{"type":"set_param","id":"{}","normalized":{n}}}"#, d.id)
        } else {
            let span = d.hi - d.lo;
            let v: f64 = rng.random_range(d.lo - 0.25 * span..d.hi + 0.25 * span);
            format!(r#"{{"type":"set_param","id":"{}","value":{v}}}"#, d.id)
        }
    } else if roll < 0.88 {
        let note: u8 = rng.random_range(0..128);
        let vel: f64 = rng.random();
        format!(r#"{{"type":"note_on","note":{note},"velocity":{vel}}}"#)
    } else if roll < 0.96 {
        format!(r#"{{"type":"note_off","note":{}}}"#, rng.random_range(0..128u8))
    } else if roll < 0.98 {
        let engine = if rng.random_bool(0.5) { "shadows" } else { "wintermute" };
        format!(r#"{{"type":"select_engine","engine":"{engine}"}}"#)
    } else if roll < 0.99 {
        r#"{"type":"all_notes_off"}"#.to_string()
    } else if roll < 0.995 {
        let names: Vec<&str> = factory_names().collect();
        format!(r#"{{"type":"load_preset","name":"{}"}}"#, names[rng.random_range(0..names.len())])
    } else {
        // Rejected requests must not disturb anything either.
        r#"{"type":"set_param","id":"no.such.param","value":1}"#.to_string()
    }
}

fn realtime_safety() -> Result<String, String> {
    const MESSAGES: usize = 1_000_000;
    let params = ParamSet::default();
    let (host, mailbox, _meters) = AudioHost::new(SR, 5, EngineKind::Shadows, &params);
    let mut controller = Controller::new(mailbox, SR, EngineKind::Shadows, params, None);
    let audio = NullAudio::start(
        host,
        DriverConfig {
            buffer_frames: 256,
            pacing: Pacing::FreeRunning,
            tap_frames: 0,
            callback_hook: Some(callback_hook),
        },
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rejected = 0;
    for _ in 0..MESSAGES {
        let text = random_message(&mut rng);
        let outcome = controller.handle_text(&text).map_err(|e| e.to_string())?;
        if outcome
            .reply
            .iter()
            .any(|e| matches!(e, gloam_server::protocol::Event::Error { .. }))
        {
            rejected += 1;
        }
    }
    controller.mailbox().flush().map_err(|e| e.to_string())?;
    // The last command was popped; let that callback finish and one more run.
    let seen = audio.callbacks();
    let deadline = Instant::now() + Duration::from_secs(5);
    while audio.callbacks() < seen + 2 {
        ensure(Instant::now() < deadline, || "audio thread stalled".into())?;
        std::thread::yield_now();
    }
    let callbacks = audio.callbacks();
    let host = audio.stop();
    let allocs = CALLBACK_ALLOCS.load(Ordering::Relaxed);
    ensure(allocs == 0, || format!("{allocs} allocations inside {callbacks} callbacks"))?;
    ensure(host.active_engine() == controller.engine(), || "engine selection diverged".into())?;
    for d in REGISTRY.iter() {
        let (got, want) = (host.params().get(d.param), controller.params().get(d.param));
        ensure(got.to_bits() == want.to_bits(), || format!("{}: engine has {got}, expected {want}", d.id))?;
    }
    Ok(format!(
        "{MESSAGES} messages ({rejected} rejected), {callbacks} callbacks, 0 allocations, all {} parameters exact",
        REGISTRY.len()
    ))
}
