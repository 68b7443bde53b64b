import sys
from loguru import logger

from source.chernoff import config

# Trace < Debug < Info < Success < Warning < Error < Critical

CONSOLE_FORMAT = (
    "<green>{time:YYYYMMDD HH:mm:ss}</green> | "  # 时间
    "{process.name} | "  # 进程名
    "{thread.name} | "  # 线程名
    "<cyan>{module}</cyan>.<cyan>{function}</cyan>"  # 模块名.方法名
    ":<cyan>{line}</cyan> | "  # 行号
    "<level>{level}</level>: "  # 等级
    "<level>{message}</level>"  # 日志内容
)

FILE_FORMAT = (
    "{time:YYYYMMDD HH:mm:ss} - "
    "{process.name} | "
    "{thread.name} | "
    "{module}.{function}:{line} - {level} -{message}"
)


class MyLogger:
    _configured = False

    def __init__(self):
        self.logger = logger
        if MyLogger._configured:
            return
        # 清空所有设置
        self.logger.remove()
        # stdout 留给命令行输出的文档，日志一律写 stderr
        self.logger.add(sys.stderr, level=config.LOG_LEVEL, format=CONSOLE_FORMAT)
        if config.LOG_FILE:
            self.logger.add(config.LOG_FILE, level="DEBUG", encoding="UTF-8",
                            format=FILE_FORMAT,
                            rotation="10 MB",
                            retention=20,
                            )
        MyLogger._configured = True

    def get_logger(self):
        return self.logger


log = MyLogger().get_logger()
