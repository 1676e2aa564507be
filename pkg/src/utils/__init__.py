"""工具函数：配置、缓存、终端输出与产物渲染"""
