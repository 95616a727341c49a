use std::fs;

use chrono::NaiveDate;
use happening::store::{EventStore, NewEvent, LOG_FILE};
use happening_core::{parse_date, Event, EventId, Member, Timestamp};
use proptest::prelude::*;

fn today() -> NaiveDate {
    parse_date("2016-06-30").unwrap()
}

fn now() -> Timestamp {
    "2016-06-30T12:00:00Z".parse().unwrap()
}

fn everything(store: &EventStore) -> Vec<Event> {
    store.scan_events(NaiveDate::MIN, NaiveDate::MAX).unwrap()
}

#[derive(Debug, Clone)]
enum Op {
    Append {
        author: usize,
        days_ago: u64,
        priority: i64,
    },
    Delete {
        pick: usize,
    },
    Reopen,
    Compact,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        5 => (0usize..3, 0u64..60, 1i64..=3).prop_map(|(author, days_ago, priority)| Op::Append { author, days_ago, priority }),
        2 => any::<usize>().prop_map(|pick| Op::Delete { pick }),
        1 => Just(Op::Reopen),
        1 => Just(Op::Compact),
    ]
}

const AUTHORS: [&str; 3] = ["ana", "ben", "cleo"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifetime_invariants(ops in prop::collection::vec(op(), 1..40)) {
        let dir = tempfile::tempdir().unwrap();
        let mut store = EventStore::open(dir.path()).unwrap();
        for id in AUTHORS {
            store.add_member(Member::new(id, id).unwrap()).unwrap();
        }
        let mut last_id = 0u64;
        for op in ops {
            match op {
                Op::Append { author, days_ago, priority } => {
                    let date = (today() - chrono::Duration::days(days_ago as i64)).to_string();
                    let event = store.append_event(
                        &NewEvent { author: AUTHORS[author], description: "note", priority, event_date: &date },
                        today(),
                        now(),
                    ).unwrap();
                    prop_assert!(event.id.0 > last_id);
                    last_id = event.id.0;
                }
                Op::Delete { pick } => {
                    let live: Vec<Event> = store.events().cloned().collect();
                    if !live.is_empty() {
                        let victim = &live[pick % live.len()];
                        store.delete_event(victim.id, victim.author.as_str(), now()).unwrap();
                        prop_assert!(store.event(victim.id).is_none());
                    }
                }
                Op::Reopen => {
                    let before = everything(&store);
                    drop(store);
                    store = EventStore::open(dir.path()).unwrap();
                    prop_assert_eq!(everything(&store), before);
                    prop_assert!(store.next_event_id().0 > last_id);
                }
                Op::Compact => {
                    let before = everything(&store);
                    let first = store.compact().unwrap();
                    prop_assert_eq!(everything(&store), before.clone());
                    let second = store.compact().unwrap();
                    prop_assert_eq!(second.records_before, first.records_after);
                    prop_assert_eq!(second.records_after, first.records_after);
                    prop_assert!(store.next_event_id().0 > last_id);
                }
            }
        }
        let before = everything(&store);
        drop(store);
        let store = EventStore::open(dir.path()).unwrap();
        prop_assert_eq!(everything(&store), before);
        prop_assert!(store.next_event_id().0 > last_id);
    }

    #[test]
    fn truncation_anywhere_loses_at_most_the_last_record(cut in 0.0f64..1.0, events in 1usize..6) {
        let dir = tempfile::tempdir().unwrap();
        {
            let mut store = EventStore::open(dir.path()).unwrap();
            store.add_member(Member::new("ana", "Ana").unwrap()).unwrap();
            for n in 0..events {
                let desc = format!("event {n}");
                store.append_event(
                    &NewEvent { author: "ana", description: &desc, priority: 2, event_date: "2016-06-01" },
                    today(),
                    now(),
                ).unwrap();
            }
        }
        let path = dir.path().join(LOG_FILE);
        let bytes = fs::read(&path).unwrap();
        let offset = (bytes.len() as f64 * cut) as usize;
        fs::write(&path, &bytes[..offset]).unwrap();
        let complete_lines = bytes[..offset].iter().filter(|b| **b == b'\n').count();
        let store = EventStore::open(dir.path()).unwrap();
        prop_assert_eq!(store.record_count(), complete_lines);
        prop_assert_eq!(store.warnings().len(), usize::from(offset > 0 && bytes[offset - 1] != b'\n'));
    }
}

#[test]
fn log_file_is_one_json_object_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let mut store = EventStore::open(dir.path()).unwrap();
    store
        .add_member(Member::new("ana", "Ana").unwrap())
        .unwrap();
    store
        .append_event(
            &NewEvent {
                author: "ana",
                description: "Sprint review moved",
                priority: 2,
                event_date: "2016-05-10",
            },
            today(),
            "2016-05-10T08:00:00Z".parse().unwrap(),
        )
        .unwrap();
    store
        .delete_event(EventId(1), "ana", "2016-05-10T09:00:00Z".parse().unwrap())
        .unwrap();
    let text = fs::read_to_string(dir.path().join(LOG_FILE)).unwrap();
    assert_eq!(
        text,
        concat!(
            "{\"seq\":1,\"kind\":\"member\",\"v\":1,\"payload\":{\"id\":\"ana\",\"display_name\":\"Ana\"}}\n",
            "{\"seq\":2,\"kind\":\"event\",\"v\":1,\"payload\":{\"id\":1,\"author\":\"ana\",\"description\":\"Sprint review moved\",\"priority\":2,\"event_date\":\"2016-05-10\",\"created_at\":\"2016-05-10T08:00:00Z\"}}\n",
            "{\"seq\":3,\"kind\":\"tombstone\",\"v\":1,\"payload\":{\"event_id\":1,\"deleted_by\":\"ana\",\"deleted_at\":\"2016-05-10T09:00:00Z\"}}\n",
        )
    );
}

#[test]
fn open_does_not_modify_the_log() {
    let dir = tempfile::tempdir().unwrap();
    {
        let mut store = EventStore::open(dir.path()).unwrap();
        store
            .add_member(Member::new("ana", "Ana").unwrap())
            .unwrap();
    }
    let path = dir.path().join(LOG_FILE);
    let mut bytes = fs::read(&path).unwrap();
    bytes.extend_from_slice(b"{\"partial");
    fs::write(&path, &bytes).unwrap();
    drop(EventStore::open(dir.path()).unwrap());
    assert_eq!(fs::read(&path).unwrap(), bytes);
}
