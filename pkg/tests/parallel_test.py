from hgflow._parallel import ordered_map, thread_count


def test_thread_count_from_environment(monkeypatch):
    monkeypatch.setenv('HGFLOW_THREADS', '3')
    assert thread_count() == 3


def test_thread_count_ignores_garbage(monkeypatch):
    monkeypatch.setenv('HGFLOW_THREADS', 'many')
    assert thread_count() >= 1
    monkeypatch.setenv('HGFLOW_THREADS', '0')
    assert thread_count() >= 1


def test_ordered_map_keeps_order(monkeypatch):
    monkeypatch.setenv('HGFLOW_THREADS', '4')
    assert ordered_map(lambda k: k * k, range(20)) == [k * k for k in range(20)]


def test_ordered_map_sequential(monkeypatch):
    monkeypatch.setenv('HGFLOW_THREADS', '1')
    assert ordered_map(str, [1, 2]) == ['1', '2']
    assert ordered_map(str, []) == []
