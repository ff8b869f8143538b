import logging

from src import log_config


def test_log_directory_is_created_on_first_record(tmp_path, monkeypatch):
    log_dir = tmp_path / 'logs'
    monkeypatch.setattr(log_config, 'LOG_DIR', str(log_dir))
    handler = log_config.get_file_handler('unit.log')
    assert not log_dir.exists()
    logger = logging.getLogger('unit.log_config')
    logger.addHandler(handler)
    try:
        logger.warning('first record')
    finally:
        logger.removeHandler(handler)
        handler.close()
    assert 'first record' in (log_dir / 'unit.log').read_text(encoding='utf-8')
